#include "catprompt/cat/laws.hpp"

#include <algorithm>

#include "catprompt/error.hpp"
#include "catprompt/text/template.hpp"

namespace catprompt::cat {

std::string evaluate(const CategoryPresentation& presentation, const Path& path,
                     const std::string& input, const Semantics& semantics) {
  std::string value = input;
  for (const auto& label : path.arrows) {
    value = semantics.apply(presentation.generator(label), value);
  }
  return value;
}

FunctionSemantics& FunctionSemantics::define(std::string arrow, Fn fn) {
  arrows_[std::move(arrow)] = std::move(fn);
  return *this;
}

FunctionSemantics& FunctionSemantics::witness(std::string object, std::vector<std::string> values) {
  witnesses_[std::move(object)] = std::move(values);
  return *this;
}

std::string FunctionSemantics::apply(const Arrow& arrow, const std::string& input) const {
  auto it = arrows_.find(arrow.label);
  if (it == arrows_.end()) {
    throw Error(Errc::missing_semantics, "no semantics for arrow '" + arrow.label + "'");
  }
  return it->second(input);
}

std::vector<std::string> FunctionSemantics::witnesses(const ObjectId& object) const {
  auto it = witnesses_.find(object.label);
  return it == witnesses_.end() ? std::vector<std::string>{} : it->second;
}

// --- reports -------------------------------------------------------------------

bool LawReport::passed() const { return failures() == 0; }

std::size_t LawReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(), [](const auto& i) { return !i.passed; }));
}

const LawInstance* LawReport::first_failure() const {
  for (const auto& i : instances) {
    if (!i.passed) return &i;
  }
  return nullptr;
}

void LawReport::merge(const LawReport& other) {
  instances.insert(instances.end(), other.instances.begin(), other.instances.end());
  truncated = truncated || other.truncated;
}

nlohmann::json LawReport::to_json() const {
  nlohmann::json j;
  j["subject"] = subject;
  j["passed"] = passed();
  j["instances"] = instances.size();
  j["failures"] = failures();
  j["truncated"] = truncated;

  // Per-law tallies keep the report small; only failures are listed in full.
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& i : instances) {
    auto& t = tally[i.law];
    ++t.first;
    if (!i.passed) ++t.second;
  }
  j["laws"] = nlohmann::json::object();
  for (const auto& [law, t] : tally) j["laws"][law] = {{"checked", t.first}, {"failed", t.second}};

  j["counterexamples"] = nlohmann::json::array();
  for (const auto& i : instances) {
    if (i.passed) continue;
    nlohmann::json c{{"law", i.law},
                     {"subject", i.subject},
                     {"exact_equal", i.exact_equal},
                     {"normalized_equal", i.normalized_equal},
                     {"lhs", i.lhs},
                     {"rhs", i.rhs}};
    c["witness"] = i.witness ? nlohmann::json(*i.witness) : nlohmann::json(nullptr);
    j["counterexamples"].push_back(std::move(c));
  }
  return j;
}

bool LawRecorder::full() const { return report_.instances.size() >= options_.max_instances; }

bool LawRecorder::record(const std::string& law, const std::string& subject,
                         const std::optional<std::string>& witness, const std::string& lhs,
                         const std::string& rhs) {
  if (full()) {
    report_.truncated = true;
    return false;
  }
  LawInstance inst;
  inst.law = law;
  inst.subject = subject;
  inst.witness = witness;
  inst.exact_equal = lhs == rhs;
  inst.normalized_equal =
      inst.exact_equal || text::normalize_whitespace(lhs) == text::normalize_whitespace(rhs);
  inst.passed = options_.accept_normalized ? inst.normalized_equal : inst.exact_equal;
  if (!inst.passed) {
    inst.lhs = lhs;
    inst.rhs = rhs;
  }
  report_.instances.push_back(std::move(inst));
  return true;
}

bool LawRecorder::record_structural(const std::string& law, const std::string& subject, bool ok,
                                    const std::string& detail) {
  if (full()) {
    report_.truncated = true;
    return false;
  }
  LawInstance inst;
  inst.law = law;
  inst.subject = subject;
  inst.passed = inst.exact_equal = inst.normalized_equal = ok;
  if (!ok) inst.lhs = detail;
  report_.instances.push_back(std::move(inst));
  return true;
}

// --- category laws ------------------------------------------------------------------

LawReport check_category_laws(const CategoryPresentation& cat, const Semantics& sem,
                              const LawOptions& options) {
  LawReport report;
  report.subject = "category " + cat.name();
  LawRecorder rec(report, options);

  for (const auto& f : cat.generators()) {
    Path fp = cat.arrow(f.label);
    Path left = compose(cat.identity(f.dom), fp);
    Path right = compose(fp, cat.identity(f.cod));
    rec.record_structural("identity.left", "1;" + f.label, left == fp, left.to_string());
    rec.record_structural("identity.right", f.label + ";1", right == fp, right.to_string());
    for (const auto& x : sem.witnesses(f.dom)) {
      std::string direct = sem.apply(f, x);
      if (!rec.record("identity.left", "1;" + f.label, x, evaluate(cat, left, x, sem), direct)) {
        return report;
      }
      if (!rec.record("identity.right", f.label + ";1", x, evaluate(cat, right, x, sem), direct)) {
        return report;
      }
    }
  }

  for (const auto& f : cat.generators()) {
    for (const Arrow* g : cat.outgoing(f.cod)) {
      for (const Arrow* h : cat.outgoing(g->cod)) {
        std::string subject = "(" + f.label + ";" + g->label + ");" + h->label;
        Path fg = compose(cat.arrow(f.label), cat.arrow(g->label));
        Path gh = compose(cat.arrow(g->label), cat.arrow(h->label));
        for (const auto& x : sem.witnesses(f.dom)) {
          std::string lhs = sem.apply(*h, evaluate(cat, fg, x, sem));
          std::string rhs = evaluate(cat, gh, sem.apply(f, x), sem);
          if (!rec.record("associativity", subject, x, lhs, rhs)) return report;
        }
      }
    }
  }

  for (const auto& r : cat.relations()) {
    std::string subject = r.lhs.to_string() + " = " + r.rhs.to_string();
    for (const auto& x : sem.witnesses(r.lhs.dom)) {
      if (!rec.record("relation", subject, x, evaluate(cat, r.lhs, x, sem),
                      evaluate(cat, r.rhs, x, sem))) {
        return report;
      }
    }
  }
  return report;
}

// --- functor laws ------------------------------------------------------------------

LawReport check_functor_laws(const FunctorDef& F, const Semantics& target_sem,
                             const LawOptions& options) {
  F.validate();
  const CategoryPresentation& src = *F.source;
  const CategoryPresentation& tgt = *F.target;

  LawReport report;
  report.subject = "functor " + F.name + ": " + src.name() + " -> " + tgt.name();
  LawRecorder rec(report, options);

  for (const auto& obj : src.objects()) {
    ObjectId fx = F.map_object(obj);
    Path image = F.map_path(src.identity(obj));
    rec.record_structural("functor.identity", obj.label, image == tgt.identity(fx),
                          image.to_string());
    for (const auto& w : target_sem.witnesses(fx)) {
      if (!rec.record("functor.identity", obj.label, w, evaluate(tgt, image, w, target_sem), w)) {
        return report;
      }
    }
  }

  for (const auto& f : src.generators()) {
    for (const Arrow* g : src.outgoing(f.cod)) {
      Path composite = compose(src.arrow(f.label), src.arrow(g->label));
      Path whole = F.map_path(composite);
      Path ff = F.map_arrow(f.label);
      Path fg = F.map_arrow(g->label);
      // Mapped pieces composed in the target, in the order the variance dictates.
      Path pieces = F.variance == Variance::covariant ? compose(ff, fg) : compose(fg, ff);
      std::string subject = "F(" + f.label + ";" + g->label + ")";
      rec.record_structural("functor.composition", subject, whole == pieces, whole.to_string());
      for (const auto& w : target_sem.witnesses(whole.dom)) {
        std::string lhs = evaluate(tgt, whole, w, target_sem);
        std::string rhs = F.variance == Variance::covariant
                              ? evaluate(tgt, fg, evaluate(tgt, ff, w, target_sem), target_sem)
                              : evaluate(tgt, ff, evaluate(tgt, fg, w, target_sem), target_sem);
        if (!rec.record("functor.composition", subject, w, lhs, rhs)) return report;
      }
    }
  }

  for (const auto& r : src.relations()) {
    Path lhs = F.map_path(r.lhs);
    Path rhs = F.map_path(r.rhs);
    std::string subject = "F(" + r.lhs.to_string() + ") = F(" + r.rhs.to_string() + ")";
    for (const auto& w : target_sem.witnesses(lhs.dom)) {
      if (!rec.record("functor.relation", subject, w, evaluate(tgt, lhs, w, target_sem),
                      evaluate(tgt, rhs, w, target_sem))) {
        return report;
      }
    }
  }
  return report;
}

// --- naturality ------------------------------------------------------------------------

LawReport check_naturality(const NatTransDef& alpha, const Semantics& target_sem,
                           const LawOptions& options) {
  alpha.validate();
  const FunctorDef& F = alpha.from;
  const FunctorDef& G = alpha.to;
  const CategoryPresentation& tgt = *F.target;

  LawReport report;
  report.subject = "transformation " + alpha.name + ": " + F.name + " => " + G.name;
  LawRecorder rec(report, options);

  for (const auto& f : F.source->generators()) {
    // Under contravariance the images run from the codomain's image.
    const ObjectId& a = F.variance == Variance::covariant ? f.dom : f.cod;
    const ObjectId& b = F.variance == Variance::covariant ? f.cod : f.dom;
    Path lhs = compose(F.map_arrow(f.label), alpha.component(b));
    Path rhs = compose(alpha.component(a), G.map_arrow(f.label));
    std::string subject = "naturality at " + f.label;
    for (const auto& w : target_sem.witnesses(lhs.dom)) {
      if (!rec.record("naturality", subject, w, evaluate(tgt, lhs, w, target_sem),
                      evaluate(tgt, rhs, w, target_sem))) {
        return report;
      }
    }
  }
  return report;
}

}  // namespace catprompt::cat
