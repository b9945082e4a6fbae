#include "catprompt/cat/closed.hpp"

#include "catprompt/error.hpp"

namespace catprompt::cat {

namespace {

void check_two_slots(const text::Template& t, const std::string& a, const std::string& b,
                     const std::string& label) {
  auto slots = t.slots();
  if (slots.size() != 2 || a == b || t.occurrences(a) != 1 || t.occurrences(b) != 1) {
    throw Error(Errc::curry_shape, "arrow '" + label + "' must have exactly the slots {" + a +
                                       "} and {" + b + "}, each once");
  }
}

}  // namespace

text::Template CurriedArrow::apply(const std::string& context) const {
  return body.bind(context_slot, context);
}

CurriedArrow curry(const BinaryArrow& f, const ExponentialWitness& w) {
  if (f.left != w.exponent || f.right != w.context) {
    throw Error(Errc::curry_shape, "arrow '" + f.label + "' has domain " + f.left.label + "*" +
                                       f.right.label + " but the exponential expects " +
                                       w.exponent.label + "*" + w.context.label);
  }
  if (f.cod != w.base) {
    throw Error(Errc::curry_shape, "arrow '" + f.label + "' lands in " + f.cod.label +
                                       " but the exponential has base " + w.base.label);
  }
  check_two_slots(f.description, f.left_slot, f.right_slot, f.label);
  return CurriedArrow{"curry(" + f.label + ")", f.description, f.left_slot, f.right_slot,
                      w.context, w.object, w.exponent, w.base};
}

BinaryArrow uncurry(const CurriedArrow& lambda, const ExponentialWitness& w) {
  if (lambda.dom != w.context || lambda.cod != w.object || lambda.exponent != w.exponent ||
      lambda.base != w.base) {
    throw Error(Errc::curry_shape, "arrow '" + lambda.label + "' is not shaped " +
                                       w.context.label + " -> " + w.object.label);
  }
  check_two_slots(lambda.body, lambda.exponent_slot, lambda.context_slot, lambda.label);
  std::string label = lambda.label;
  if (label.starts_with("curry(") && label.ends_with(")")) {
    label = label.substr(6, label.size() - 7);
  } else {
    label = "uncurry(" + label + ")";
  }
  return BinaryArrow{label,          lambda.body, w.exponent, lambda.exponent_slot,
                     w.context, lambda.context_slot, w.base};
}

std::string evaluate(const text::Template& element, const std::string& x,
                     const Completion& complete) {
  auto slots = element.slots();
  if (slots.size() != 1 || element.occurrences(slots.front()) != 1) {
    throw Error(Errc::evaluation, "exponential element must have exactly one slot, got " +
                                      std::to_string(slots.size()) + " in \"" + element.source() +
                                      "\"");
  }
  return complete(element.render({{slots.front(), x}}));
}

std::string apply(const BinaryArrow& f, const std::string& x, const std::string& y,
                  const Completion& complete) {
  return complete(f.description.render({{f.left_slot, x}, {f.right_slot, y}}));
}

}  // namespace catprompt::cat
