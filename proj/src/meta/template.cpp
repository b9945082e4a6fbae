#include "catprompt/meta/template.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include "catprompt/meta/builtin_templates.hpp"

namespace catprompt::meta {

namespace {

bool mentions(const std::string& slot, std::string_view word) {
  return slot.find(word) != std::string::npos;
}

void assign_role(std::optional<std::string>& role, const std::string& slot, const char* what,
                 const std::string& name) {
  if (role) {
    throw Error(Errc::parse, "template '" + name + "' has two " + what + " slots: '" + *role +
                                 "' and '" + slot + "'");
  }
  role = slot;
}

const std::regex& marker_line() {
  // A number of at most three digits, then ")" or "." not followed by a digit.
  static const std::regex re(R"(^\s*(\d{1,3})[.)](?!\d)\s*(.*)$)");
  return re;
}

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

char marker_char(ListMarker m) { return m == ListMarker::paren ? ')' : '.'; }

}  // namespace

MetaPromptTemplate MetaPromptTemplate::from_source(std::string name, std::string_view source,
                                                   std::size_t expected_count) {
  if (expected_count == 0) throw Error(Errc::parse, "template '" + name + "' expects no prompts");
  MetaPromptTemplate t;
  t.body = text::Template::parse(source);
  t.expected_count = expected_count;

  std::optional<std::string> context, task, examples;
  for (const auto& slot : t.body.slots()) {
    if (t.body.occurrences(slot) != 1) {
      throw Error(Errc::parse, "slot '" + slot + "' of template '" + name + "' is used " +
                                   std::to_string(t.body.occurrences(slot)) + " times");
    }
    if (mentions(slot, "EXAMPLE")) {
      assign_role(examples, slot, "examples", name);
    } else if (mentions(slot, "CONTEXT") || mentions(slot, "CONTENT")) {
      assign_role(context, slot, "context", name);
    } else if (mentions(slot, "TASK")) {
      assign_role(task, slot, "task", name);
    } else {
      throw Error(Errc::parse, "slot '" + slot + "' of template '" + name + "' has no role");
    }
  }
  if (!context) throw Error(Errc::parse, "template '" + name + "' has no context slot");
  if (!task) throw Error(Errc::parse, "template '" + name + "' has no task slot");
  t.context_slot = *context;
  t.task_slot = *task;
  t.examples_slot = examples;

  std::string_view last = source.substr(source.rfind('\n') == std::string_view::npos
                                            ? 0
                                            : source.rfind('\n') + 1);
  static const std::regex seed_re(R"(^\d{1,3}([.)])\s*$)");
  std::cmatch m;
  if (std::regex_match(last.begin(), last.end(), m, seed_re)) {
    t.seed = std::string(last);
    t.marker = m[1].str() == "." ? ListMarker::dot : ListMarker::paren;
  }
  t.name = std::move(name);
  return t;
}

MetaPromptTemplate MetaPromptTemplate::load(const std::filesystem::path& path,
                                            std::size_t expected_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open template " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_source(path.stem().string(), buf.str(), expected_count);
}

const std::string& builtin_source(std::string_view stem) {
  const auto& all = builtin_template_sources();
  auto it = all.find(std::string(stem));
  if (it == all.end()) throw Error(Errc::not_found, "no built-in template '" + std::string(stem) + "'");
  return it->second;
}

MetaPromptTemplate MetaPromptTemplate::builtin(std::string_view name) {
  if (name == kFullTemplate) return from_source("full", builtin_source("meta_prompt_full"));
  if (name == kShortTemplate) return from_source("short", builtin_source("meta_prompt_short"));
  throw Error(Errc::not_found, "no built-in meta-prompt '" + std::string(name) + "'");
}

MetaPromptTemplate MetaPromptTemplate::resolve(const std::string& name_or_path) {
  if (name_or_path == kFullTemplate || name_or_path == kShortTemplate) return builtin(name_or_path);
  return load(name_or_path);
}

std::string render_meta_prompt(const MetaPromptTemplate& t, std::string_view task_description,
                               std::string_view context, const std::vector<std::string>& examples) {
  text::SlotValues values{{t.context_slot, std::string(context)},
                          {t.task_slot, std::string(task_description)}};
  if (!t.examples_slot) {
    if (!examples.empty()) {
      throw Error(Errc::missing_slot, "template '" + t.name + "' has no examples slot");
    }
    return t.body.render(values);
  }
  if (!examples.empty()) {
    std::string joined = examples.front();
    for (std::size_t i = 1; i < examples.size(); ++i) {
      joined += "\n" + std::to_string(i + 1) + marker_char(t.marker) + " " + examples[i];
    }
    values[*t.examples_slot] = std::move(joined);
    return t.body.render(values);
  }

  // Drop the blank-line delimited paragraph holding the examples slot.
  const char sentinel = '\x1f';
  std::string src = t.body.bind(*t.examples_slot, std::string(1, sentinel)).source();
  auto pos = src.find(sentinel);
  auto prev = src.rfind("\n\n", pos);
  auto next = src.find("\n\n", pos);
  if (prev != std::string::npos && next != std::string::npos) {
    src.erase(prev, next - prev);
  } else if (next != std::string::npos) {
    src.erase(0, next + 2);
  } else if (prev != std::string::npos) {
    src.erase(prev);
  } else {
    src.clear();
  }
  return text::Template::parse(src).render(values);
}

std::string render_meta_prompt(const MetaPromptTemplate& t, std::string_view task_description,
                               std::string_view context, const std::vector<std::string>& examples,
                               const llm::TokenBudget& budget, const llm::Tokenizer& tokenizer,
                               std::size_t max_output_tokens) {
  std::string out = render_meta_prompt(t, task_description, context, examples);
  auto d = llm::enforce_budget(llm::CompletionRequest{out, max_output_tokens, 0}, budget, tokenizer);
  if (!d) {
    throw Error(Errc::budget_exceeded, "meta-prompt '" + t.name + "' needs " +
                                           std::to_string(d.prompt_tokens) + " + " +
                                           std::to_string(d.max_output_tokens) +
                                           " tokens, over k = " + std::to_string(d.k));
  }
  return out;
}

ParsedList parse_numbered_list(std::string_view completion, std::size_t expected,
                               std::string_view seed) {
  ParsedList out;
  std::vector<std::string> lines;
  {
    std::string s(completion);
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  }

  bool started = false;
  bool done = false;
  bool gap = false;  // blank line since the last item text
  for (const auto& line : lines) {
    std::string body = trim(line);
    if (body.empty()) {
      gap = true;
      continue;
    }
    std::smatch m;
    bool marked = std::regex_match(line, m, marker_line());
    // The last item may still wrap onto following lines; a new marker or a
    // paragraph break ends the list.
    if (done && (marked || gap)) {
      out.extra_text = true;
      continue;
    }
    gap = false;
    if (!started && !marked && !seed.empty()) {
      out.seed_recovered = true;
      out.items.push_back(body);
      started = true;
    } else if (marked) {
      out.items.push_back(trim(m[2].str()));
      started = true;
    } else if (started) {
      auto& last = out.items.back();
      last += last.empty() ? body : " " + body;
    } else {
      out.extra_text = true;  // preamble before the list
      continue;
    }
    if (out.items.size() == expected) done = true;
  }
  if (out.items.size() < expected) {
    throw ListParseError("expected " + std::to_string(expected) + " list items, found " +
                             std::to_string(out.items.size()),
                         out.items);
  }
  return out;
}

std::string format_numbered_list(const std::vector<std::string>& items, ListMarker marker) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += '\n';
    out += std::to_string(i + 1) + marker_char(marker) + " " + items[i];
  }
  return out;
}

}  // namespace catprompt::meta
