#pragma once

#include <functional>
#include <span>
#include <string>

#include "catprompt/cat/laws.hpp"
#include "catprompt/cat/presentation.hpp"

namespace catprompt::cat {

/// Tensor, unit and structure isomorphisms acting on witness values. The
/// unitors and associator default to the identity on values, which is what a
/// strict monoidal structure (like string concatenation) expects.
struct MonoidalStructure {
  std::function<std::string(const std::string&, const std::string&)> tensor;
  std::string unit;
  ObjectId unit_object{"I"};

  std::function<std::string(const std::string&)> left_unitor;
  std::function<std::string(const std::string&)> right_unitor;
  std::function<std::string(const std::string&)> associator;
};

/// Unit laws on both sides, strict associativity of the tensor, and the
/// unitor/associator witnesses, over all pairs and triples of `witnesses`
/// (up to the instance cap).
LawReport check_monoidal_laws(const MonoidalStructure& monoidal,
                              std::span<const std::string> witnesses,
                              const LawOptions& options = {});

}  // namespace catprompt::cat
