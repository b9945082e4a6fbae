#include "catprompt/prompt/objects.hpp"

#include <algorithm>

#include "catprompt/error.hpp"

namespace catprompt::prompt {

bool Membership::contains(const std::string& s) const {
  bool listed = std::find(members.begin(), members.end(), s) != members.end();
  switch (kind) {
    case Kind::any: return true;
    case Kind::allow_list: return listed;
    case Kind::exclude_list: return !listed;
  }
  return false;
}

StrObject make_object(std::string label, std::vector<std::string> witnesses,
                      Membership membership) {
  StrObject o;
  o.label = std::move(label);
  for (auto& w : witnesses) {
    if (std::find(o.witnesses.begin(), o.witnesses.end(), w) == o.witnesses.end()) {
      o.witnesses.push_back(std::move(w));
    }
  }
  if (membership.kind == Membership::Kind::allow_list) {
    for (const auto& w : o.witnesses) {
      if (!membership.contains(w)) membership.members.push_back(w);
    }
  }
  o.membership = std::move(membership);
  return o;
}

std::string PromptArrow::render(const std::string& input) const {
  return description.render({{slot, input}});
}

PromptArrow make_arrow(std::string label, std::string_view description, std::string dom,
                       std::string cod) {
  text::Template t = text::Template::parse(description);
  auto slots = t.slots();
  if (slots.size() != 1 || t.occurrences(slots.front()) != 1) {
    throw Error(Errc::construction, "arrow '" + label + "' template \"" + std::string(description) +
                                        "\" must contain exactly one slot, once");
  }
  return PromptArrow{std::move(label), std::move(t), std::move(dom), std::move(cod), slots.front()};
}

std::string tensor_strings(std::string_view x, std::string_view y) {
  if (x.empty()) return std::string(y);
  if (y.empty()) return std::string(x);
  std::string out;
  out.reserve(x.size() + y.size() + 1);
  out.append(x);
  out.push_back('\n');
  out.append(y);
  return out;
}

std::string tensor_strings(std::string_view x, std::string_view y, const llm::TokenBudget& budget,
                           const llm::Tokenizer& tokenizer) {
  std::string out = tensor_strings(x, y);
  std::size_t n = tokenizer.count(out);
  if (n > budget.k) {
    throw Error(Errc::budget_exceeded,
                "tensor has " + std::to_string(n) + " tokens, over k = " + std::to_string(budget.k));
  }
  return out;
}

TensorArrow tensor_arrows(const PromptArrow& p, const PromptArrow& q) {
  text::Template left = p.description.rename(p.slot, "L");
  text::Template right = q.description.rename(q.slot, "R");
  return TensorArrow{p.label + "*" + q.label, p, q,
                     text::Template::parse(tensor_strings(left.source(), right.source()))};
}

TensorArrow tensor_arrows(const PromptArrow& p, const PromptArrow& q,
                          const llm::TokenBudget& budget, const llm::Tokenizer& tokenizer) {
  TensorArrow t = tensor_arrows(p, q);
  std::size_t n = tokenizer.count(t.description.source());
  if (n > budget.k) {
    throw Error(Errc::budget_exceeded, "tensor of '" + p.label + "' and '" + q.label + "' has " +
                                           std::to_string(n) + " tokens, over k = " +
                                           std::to_string(budget.k));
  }
  return t;
}

}  // namespace catprompt::prompt
