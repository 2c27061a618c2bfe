#pragma once

#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lsikit::cli {

// Runs one `lsikit` invocation; `args` excludes the program name.
// Returns the process exit code. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// key = value lines; '#' starts a comment; '_' in keys is read as '-'.
// Throws ParseError for a line without '='.
std::map<std::string, std::string> parse_config(std::string_view content);

// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

// "1-5,8,10-12" → {1, 2, 3, 4, 5, 8, 10, 11, 12}, sorted and deduplicated.
std::vector<std::size_t> parse_rank_list(std::string_view spec);

}  // namespace lsikit::cli
