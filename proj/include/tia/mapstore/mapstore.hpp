#pragma once

#include "tia/differ/differ.hpp"
#include "tia/method_id.hpp"
#include "tia/outcome.hpp"
#include "tia/runtime/interpreter.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tia::mapstore {

struct TestMapEntry {
  std::string testName;
  std::set<MethodId> methods; // empty means "no mapping"
  // Digest of the test's canonical body at the last map update; present
  // iff the methods were recorded from an actual run.
  std::optional<std::string> sourceDigest;
  Outcome lastOutcome = Outcome::Never;
};

struct TestMap {
  int formatVersion = 1;
  std::map<std::string, TestMapEntry> entries;

  const TestMapEntry *find(const std::string &testName) const {
    auto it = entries.find(testName);
    return it == entries.end() ? nullptr : &it->second;
  }
};

struct SelectionReason {
  enum class Kind { EmptyMap, HitMethod, TestChanged, PreviouslyFailed, FailSafe };
  Kind kind = Kind::EmptyMap;
  MethodId hit; // set for HitMethod only
};

std::string reasonText(const SelectionReason &reason);

struct SelectionReport {
  std::vector<std::string> selected; // suite order
  size_t total = 0;
  size_t selectedCount = 0;
  double gainPercent = 0.0;
  std::map<std::string, SelectionReason> reasons; // selected tests only
  bool failSafe = false;
};

// 100 * (1 - selected/total); 0 when the suite is empty.
double gainPercent(size_t total, size_t selectedCount);

// The selection algorithm. A test is selected iff, checked in this order:
//   (i)   it has no entry, or its entry has no methods
//   (ii)  its body digest differs from the entry's
//   (iii) its last outcome was Fail, Error or Timeout
//   (iv)  some changed method is in its mapping
SelectionReport select(const differ::ChangeSet &changes,
                       const runtime::TestSuite &suite, const TestMap &map);

// Fail-safe selection: everything runs, regardless of the map.
SelectionReport selectAllFailSafe(const runtime::TestSuite &suite);

// Replaces the entry for the executed test with its fresh trace, digest and
// outcome. A non-Pass outcome keeps the methods but leaves the entry
// invalid for future selection via lastOutcome.
TestMap updateEntry(TestMap map, const runtime::TestResult &result,
                    const std::string &digest);

// Drops entries whose test no longer exists in the suite.
TestMap pruneRemovedTests(TestMap map, const runtime::TestSuite &suite);

// Line-based `tia.map` format, bit-exact:
//   TIA-MAP v1
//   TEST <name> <digest-hex|-> <outcome>
//     <canonical MethodId>          (two-space indent, sorted)
// Entries are sorted by test name. loadMap(saveMap(m)) == m and
// saveMap(loadMap(bytes)) == bytes.
std::string saveMap(const TestMap &map);
TestMap loadMap(const std::string &bytes); // throws FormatError/VersionError

} // namespace tia::mapstore
