#pragma once

#include <string>

#include "nag/polynomial.hpp"

namespace nag {

/// Polynomial JSON schema:
///   {"field":"real"|"complex","n":int,"degrees":[int],
///    "terms":[[i, [a_0,...,a_n], re, im]]}
/// Real scalars carry im = 0; doubles round-trip exactly (17 digits).
PolySystem parse_system_json(const std::string& text);
PolySystem load_system(const std::string& path);

std::string system_to_json(const PolySystem& f);
void save_system(const PolySystem& f, const std::string& path);

/// Reads an entire file; throws InputError naming the path on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace nag
