#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace catprompt::text {

using SlotValues = std::map<std::string, std::string, std::less<>>;

/// A prompt template with `{NAME}` slot markers.
///
/// Slot names are trimmed and internal whitespace runs (including line
/// breaks) collapse to a single space, so a marker that wraps across lines
/// still names one slot. `{{` and `}}` encode literal braces; a lone `}` is
/// taken literally. Everything outside the markers is preserved byte for byte.
class Template {
 public:
  Template() = default;

  /// Throws Error(Errc::parse) on an unterminated or empty marker.
  static Template parse(std::string_view source);

  const std::string& source() const noexcept { return source_; }

  /// Distinct slot names in order of first appearance.
  std::vector<std::string> slots() const;
  std::size_t occurrences(std::string_view slot) const;
  bool has_slot(std::string_view slot) const { return occurrences(slot) > 0; }

  /// Substitutes every slot. Missing values throw Error(Errc::missing_slot);
  /// values for slots the template does not have are ignored.
  std::string render(const SlotValues& values) const;

  /// Substitutes one slot and keeps the rest as markers. The value is escaped,
  /// so later rendering reproduces it verbatim even if it contains braces.
  Template bind(std::string_view slot, std::string_view value) const;

  /// Renames a slot, keeping every other byte of the source.
  Template rename(std::string_view from, std::string_view to) const;

  /// The literal text with all slots removed; useful as a display form.
  std::string literal_text() const;

  friend bool operator==(const Template& a, const Template& b) {
    return a.source_ == b.source_;
  }

 private:
  struct Segment {
    bool slot = false;
    std::string value;  // decoded literal text, or the normalized slot name
    std::string raw;    // exact source bytes of this segment
  };

  std::string source_;
  std::vector<Segment> segments_;
};

/// Escapes braces so that `Template::parse(escape(s)).render({}) == s`.
std::string escape(std::string_view literal);

/// Trims and collapses whitespace runs to a single space.
std::string normalize_whitespace(std::string_view s);

}  // namespace catprompt::text
