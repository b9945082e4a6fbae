#include "catprompt/prompt/rewrite.hpp"

#include <algorithm>
#include <sstream>

#include "catprompt/error.hpp"
#include "catprompt/llm/mock.hpp"

namespace catprompt::prompt {

RewriteTable& RewriteTable::add(const std::string& s, std::vector<std::string> rewrites) {
  auto& v = entries[s];
  for (auto& r : rewrites) {
    if (std::find(v.begin(), v.end(), r) == v.end()) v.push_back(std::move(r));
  }
  return *this;
}

RewriteTable RewriteTable::from_json(const nlohmann::json& j) {
  RewriteTable t;
  try {
    for (const auto& [s, r] : j.at("rewrites").items()) {
      t.add(s, r.get<std::vector<std::string>>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::schema, std::string("rewrite table: ") + e.what());
  }
  return t;
}

nlohmann::json RewriteTable::to_json() const { return {{"rewrites", entries}}; }

std::vector<std::string> rewrite_hom(const RewriteTable& table, const std::string& s,
                                     const RewriteProposer& proposer) {
  std::vector<std::string> out{s};
  auto push = [&](const std::string& r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  if (auto it = table.entries.find(s); it != table.entries.end()) {
    for (const auto& r : it->second) push(r);
  }
  if (proposer) {
    for (const auto& r : proposer(s)) push(r);
  }
  return out;
}

RewriteProposer backend_proposer(llm::BackendPtr backend, std::size_t max_output_tokens) {
  return [backend = std::move(backend), max_output_tokens](const std::string& s) {
    std::string reply = backend->complete(
        llm::CompletionRequest{std::string(llm::kRewriteRequest) + s, max_output_tokens, 0});
    std::vector<std::string> out;
    std::istringstream in(reply);
    for (std::string line; std::getline(in, line);) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
    }
    return out;
  };
}

nlohmann::json Lemma1Result::to_json() const {
  nlohmann::json j{{"hypothesis_holds", hypothesis_holds},
                   {"pairs_checked", pairs_checked},
                   {"ok", ok()},
                   {"detail", detail}};
  if (counterexample) {
    j["counterexample"] = {{"f1", counterexample->first}, {"f2", counterexample->second}};
  }
  if (functor) {
    j["functor"] = cat::to_json(*functor);
    j["laws"] = laws.to_json();
  }
  return j;
}

namespace {

struct Search {
  const cat::CategoryPresentation& src;
  const cat::CategoryPresentation& dst;
  std::vector<std::vector<const cat::Arrow*>> candidates;  // per source generator
  std::map<std::string, std::string> objects;
  std::vector<const cat::Arrow*> chosen;

  bool bind(const std::string& from, const std::string& to, std::vector<std::string>& fresh) {
    auto [it, inserted] = objects.emplace(from, to);
    if (inserted) {
      fresh.push_back(from);
      return true;
    }
    return it->second == to;
  }

  bool run(std::size_t i) {
    if (i == candidates.size()) return true;
    const auto& a = src.generators()[i];
    for (const cat::Arrow* b : candidates[i]) {
      std::vector<std::string> fresh;
      if (bind(a.dom.label, b->dom.label, fresh) && bind(a.cod.label, b->cod.label, fresh)) {
        chosen[i] = b;
        if (run(i + 1)) return true;
      }
      for (const auto& o : fresh) objects.erase(o);
    }
    return false;
  }
};

}  // namespace

Lemma1Result check_lemma1(const TaskCategory& t1, const TaskCategory& t2, const RewriteTable& rw,
                          const Lemma1Options& options) {
  Lemma1Result result;
  const auto f1s = rewrite_hom(rw, t1.description, options.proposer);
  const auto f2s = rewrite_hom(rw, t2.description, options.proposer);
  for (const auto& x : f1s) {
    const auto gs = rewrite_hom(rw, x, options.proposer);
    for (const auto& y : f2s) {
      ++result.pairs_checked;
      if (std::find(gs.begin(), gs.end(), y) == gs.end()) {
        result.counterexample = std::make_pair(x, y);
        result.detail = "no rewrite takes \"" + x + "\" to \"" + y + "\"";
        return result;
      }
    }
  }
  result.hypothesis_holds = true;

  const auto& src = t1.presentation();
  const auto& dst = t2.presentation();
  Search search{src, dst, {}, {}, std::vector<const cat::Arrow*>(src.generators().size())};
  for (const auto& a : src.generators()) {
    const auto rewrites = rewrite_hom(rw, a.description, options.proposer);
    std::vector<const cat::Arrow*> c;
    for (const auto& b : dst.generators()) {
      if (std::find(rewrites.begin(), rewrites.end(), b.description) != rewrites.end()) {
        c.push_back(&b);
      }
    }
    if (c.empty()) {
      result.detail = "arrow '" + a.label + "' of " + t1.name + " has no rewrite among the arrows of " +
                      t2.name;
      return result;
    }
    search.candidates.push_back(std::move(c));
  }
  if (!search.run(0)) {
    result.detail = "no endpoint-consistent choice of rewritten arrows exists";
    return result;
  }

  cat::FunctorDef f;
  f.name = "L_" + t1.name + "_" + t2.name;
  f.source = t1.category->presentation_ptr();
  f.target = t2.category->presentation_ptr();
  for (std::size_t i = 0; i < search.chosen.size(); ++i) {
    f.arrow_map[src.generators()[i].label] = {search.chosen[i]->label};
  }
  f.object_map = search.objects;
  for (const auto& o : src.objects()) {
    if (f.object_map.contains(o.label)) continue;
    if (dst.has_object(o)) {
      f.object_map[o.label] = o.label;
    } else if (!dst.objects().empty()) {
      f.object_map[o.label] = dst.objects().front().label;
    } else {
      result.detail = "object '" + o.label + "' has nowhere to go in the empty " + t2.name;
      return result;
    }
  }
  result.laws = cat::check_functor_laws(f, t2.category->semantics(), options.laws);
  result.functor = std::move(f);
  result.detail = result.laws.passed() ? "functor constructed" : "functor constructed, laws fail";
  return result;
}

}  // namespace catprompt::prompt
