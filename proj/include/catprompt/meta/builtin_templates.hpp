#pragma once

#include <map>
#include <string>

namespace catprompt::meta {

/// Shipped template files keyed by file stem ("meta_prompt_full", ...).
const std::map<std::string, std::string>& builtin_template_sources();

}  // namespace catprompt::meta
