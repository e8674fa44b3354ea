#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace illu {

// --- Deterministic counter-based hashing -----------------------------------
//
// All procedural randomness in the generator is derived by hashing a seed
// together with spatial or structural coordinates. Outputs are therefore a
// pure function of (seed, coordinates) and independent of thread count and
// evaluation order.

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c);
std::uint64_t hash_string(std::uint64_t seed, std::string_view s);

// Uniform in [0, 1) from a hash value.
double uniform01(std::uint64_t h);

// Standard normal deviate from two hashed uniforms (Box-Muller).
double gaussian(std::uint64_t h1, std::uint64_t h2);

// --- Text helpers -----------------------------------------------------------

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(char32_t cp);

// Lowercases ASCII A-Z only; other bytes (including multi-byte UTF-8) pass
// through untouched.
std::string ascii_lower(std::string_view s);

// --- Encoding / digests -----------------------------------------------------

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::string base64_encode(const std::vector<std::uint8_t>& data);

std::string sha256_hex(const std::uint8_t* data, std::size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::string& path);

} // namespace illu
