#pragma once

#include <functional>
#include <string>

#include "catprompt/cat/presentation.hpp"
#include "catprompt/text/template.hpp"

namespace catprompt::cat {

/// Sends a fully rendered prompt to whatever executes it.
using Completion = std::function<std::string(const std::string& prompt)>;

/// Names the objects involved in Hom(X (x) Y, Z) ~ Hom(Y, Z^X).
struct ExponentialWitness {
  ObjectId base;      // Z
  ObjectId exponent;  // X
  ObjectId context;   // Y
  ObjectId object;    // Z^X
};

/// An arrow out of a tensor X (x) Y, given as a template with one slot per
/// factor.
struct BinaryArrow {
  std::string label;
  text::Template description;
  ObjectId left;
  std::string left_slot;
  ObjectId right;
  std::string right_slot;
  ObjectId cod;
};

/// An arrow Y -> Z^X. Applying it to a context binds the context slot and
/// leaves a single-slot template, i.e. an element of the exponential object.
struct CurriedArrow {
  std::string label;
  text::Template body;
  std::string exponent_slot;
  std::string context_slot;
  ObjectId dom;
  ObjectId cod;
  ObjectId exponent;
  ObjectId base;

  text::Template apply(const std::string& context) const;
};

/// Throws Error(Errc::curry_shape) unless f's domain is exactly
/// w.exponent (x) w.context with one occurrence of each slot.
CurriedArrow curry(const BinaryArrow& f, const ExponentialWitness& w);
BinaryArrow uncurry(const CurriedArrow& lambda, const ExponentialWitness& w);

/// The evaluation morphism Z^X (x) X -> Z. Throws Error(Errc::evaluation)
/// unless `element` has exactly one slot, used once.
std::string evaluate(const text::Template& element, const std::string& x,
                     const Completion& complete);

/// f(x (x) y): both slots rendered, one completion call.
std::string apply(const BinaryArrow& f, const std::string& x, const std::string& y,
                  const Completion& complete);

}  // namespace catprompt::cat
