#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the parsers and writers. All number handling
// goes through std::from_chars / std::to_chars so the process locale never
// changes what a file means.

namespace mteval {

std::string_view trim(std::string_view s);
std::string lower(std::string_view s);

// Splits one line on hard tabs. Empty fields are kept; a trailing '\r' on the
// last field is stripped so CRLF files parse the same as LF files.
std::vector<std::string_view> split_tsv_line(std::string_view line);

// Full-match numeric parses; nullopt on anything but a complete number.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

// Shortest decimal that round-trips the exact double.
std::string format_double(double value);
// Fixed-point with the given number of decimals (printf %.Nf semantics).
std::string format_fixed(double value, int decimals);

std::uint64_t fnv1a64(std::string_view bytes);
// Content digest used for provenance records: "fnv1a64:<16 lowercase hex>".
std::string digest_hex(std::string_view bytes);

}  // namespace mteval
