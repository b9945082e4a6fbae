#include "catprompt/text/template.hpp"

#include <algorithm>
#include <cctype>

#include "catprompt/error.hpp"

namespace catprompt::text {

namespace {

bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string escape(std::string_view literal) {
  std::string out;
  out.reserve(literal.size());
  for (char c : literal) {
    out.push_back(c);
    if (c == '{' || c == '}') out.push_back(c);
  }
  return out;
}

Template Template::parse(std::string_view source) {
  Template t;
  t.source_ = std::string(source);

  Segment literal;
  auto flush = [&] {
    if (!literal.raw.empty()) t.segments_.push_back(std::move(literal));
    literal = Segment{};
  };

  std::size_t i = 0;
  while (i < source.size()) {
    char c = source[i];
    if (c == '{' && i + 1 < source.size() && source[i + 1] == '{') {
      literal.value.push_back('{');
      literal.raw.append("{{");
      i += 2;
    } else if (c == '}' && i + 1 < source.size() && source[i + 1] == '}') {
      literal.value.push_back('}');
      literal.raw.append("}}");
      i += 2;
    } else if (c == '{') {
      std::size_t close = source.find_first_of("{}", i + 1);
      if (close == std::string_view::npos || source[close] != '}') {
        throw Error(Errc::parse, "unterminated slot marker at offset " + std::to_string(i));
      }
      std::string name = normalize_whitespace(source.substr(i + 1, close - i - 1));
      if (name.empty()) {
        throw Error(Errc::parse, "empty slot marker at offset " + std::to_string(i));
      }
      flush();
      t.segments_.push_back(
          Segment{true, std::move(name), std::string(source.substr(i, close - i + 1))});
      i = close + 1;
    } else {
      literal.value.push_back(c);
      literal.raw.push_back(c);
      ++i;
    }
  }
  flush();
  return t;
}

std::vector<std::string> Template::slots() const {
  std::vector<std::string> out;
  for (const auto& seg : segments_) {
    if (seg.slot && std::find(out.begin(), out.end(), seg.value) == out.end()) {
      out.push_back(seg.value);
    }
  }
  return out;
}

std::size_t Template::occurrences(std::string_view slot) const {
  return static_cast<std::size_t>(std::count_if(
      segments_.begin(), segments_.end(),
      [&](const Segment& s) { return s.slot && s.value == slot; }));
}

std::string Template::render(const SlotValues& values) const {
  std::string out;
  for (const auto& seg : segments_) {
    if (!seg.slot) {
      out += seg.value;
      continue;
    }
    auto it = values.find(seg.value);
    if (it == values.end()) {
      throw Error(Errc::missing_slot, "no value for slot {" + seg.value + "}");
    }
    out += it->second;
  }
  return out;
}

Template Template::bind(std::string_view slot, std::string_view value) const {
  std::string src;
  for (const auto& seg : segments_) {
    src += (seg.slot && seg.value == slot) ? escape(value) : seg.raw;
  }
  return parse(src);
}

Template Template::rename(std::string_view from, std::string_view to) const {
  std::string src;
  for (const auto& seg : segments_) {
    if (seg.slot && seg.value == from) {
      src += "{" + std::string(to) + "}";
    } else {
      src += seg.raw;
    }
  }
  return parse(src);
}

std::string Template::literal_text() const {
  std::string out;
  for (const auto& seg : segments_) {
    if (!seg.slot) out += seg.value;
  }
  return out;
}

}  // namespace catprompt::text
