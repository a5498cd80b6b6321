#pragma once

#include "tia/mapstore/mapstore.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fuzz {

// One randomized (program, edit) pair: an original version, a valid evolved
// version, and a fixed test suite.
struct FuzzTrial {
  std::string oldProgram;
  std::string newProgram;
  std::string tests;
};

// Generates small statically-valid MiniJ programs with inheritance,
// overrides and overloads, plus test suites over them, then evolves the
// program by body edits, renames, removals, and additions that override or
// overload existing methods. Deterministic for a fixed seed.
class Fuzzer {
public:
  explicit Fuzzer(std::uint64_t seed) : rng_(seed) {}

  FuzzTrial nextTrial();

private:
  std::mt19937_64 rng_;
};

// Random well-formed test map, for serialization round-trip properties.
tia::mapstore::TestMap randomTestMap(std::mt19937_64 &rng);

} // namespace fuzz
