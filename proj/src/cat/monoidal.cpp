#include "catprompt/cat/monoidal.hpp"

#include "catprompt/error.hpp"

namespace catprompt::cat {

namespace {

std::string short_form(const std::string& s) {
  constexpr std::size_t kMax = 24;
  return s.size() <= kMax ? "\"" + s + "\"" : "\"" + s.substr(0, kMax) + "...\"";
}

}  // namespace

LawReport check_monoidal_laws(const MonoidalStructure& m, std::span<const std::string> witnesses,
                              const LawOptions& options) {
  if (!m.tensor) throw Error(Errc::construction, "monoidal structure has no tensor");
  auto id = [](const std::string& s) { return s; };
  auto lu = m.left_unitor ? m.left_unitor : id;
  auto ru = m.right_unitor ? m.right_unitor : id;
  auto assoc = m.associator ? m.associator : id;

  LawReport report;
  report.subject = "monoidal structure";
  LawRecorder rec(report, options);

  for (const auto& x : witnesses) {
    std::string sx = short_form(x);
    std::string ix = m.tensor(m.unit, x);
    std::string xi = m.tensor(x, m.unit);
    if (!rec.record("unit.left", "I*" + sx, x, ix, x)) return report;
    if (!rec.record("unit.right", sx + "*I", x, xi, x)) return report;
    if (!rec.record("unitor.left", "l(I*" + sx + ")", x, lu(ix), x)) return report;
    if (!rec.record("unitor.right", "r(" + sx + "*I)", x, ru(xi), x)) return report;
  }

  for (const auto& x : witnesses) {
    for (const auto& y : witnesses) {
      for (const auto& z : witnesses) {
        std::string subject = "(" + short_form(x) + "*" + short_form(y) + ")*" + short_form(z);
        std::string left = m.tensor(m.tensor(x, y), z);
        std::string right = m.tensor(x, m.tensor(y, z));
        std::string w = x + " | " + y + " | " + z;
        if (!rec.record("tensor.associativity", subject, w, left, right)) return report;
        if (!rec.record("associator", "a" + subject, w, assoc(left), right)) return report;
      }
    }
  }
  return report;
}

}  // namespace catprompt::cat
