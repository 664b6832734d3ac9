#pragma once

#include <string>
#include <vector>

#include "fpnet/proposals.hpp"

namespace fpnet {

// Built-in template set for the 5-class head: two mirrored eye templates and
// one each for nose and mouth, all with a 3x part-to-face side ratio.
std::vector<PartTemplate> default_templates();

// Text format: one "part_name ax ay k" line per template, '#' comments and
// blank lines ignored; a part name may repeat (eyes use two templates).
std::vector<PartTemplate> parse_templates(const std::string& text);
std::vector<PartTemplate> load_templates(const std::string& path);

} // namespace fpnet
