#include "tia/mapstore/mapstore.hpp"

#include "tia/errors.hpp"

#include <algorithm>
#include <sstream>

namespace tia::mapstore {

std::string reasonText(const SelectionReason &reason) {
  switch (reason.kind) {
  case SelectionReason::Kind::EmptyMap:
    return "EmptyMap";
  case SelectionReason::Kind::HitMethod:
    return "HitMethod(" + reason.hit.canonical() + ")";
  case SelectionReason::Kind::TestChanged:
    return "TestChanged";
  case SelectionReason::Kind::PreviouslyFailed:
    return "PreviouslyFailed";
  case SelectionReason::Kind::FailSafe:
    return "FailSafe";
  }
  return "?";
}

double gainPercent(size_t total, size_t selectedCount) {
  if (total == 0)
    return 0.0;
  return 100.0 * (1.0 - static_cast<double>(selectedCount) /
                            static_cast<double>(total));
}

namespace {

void finishReport(SelectionReport &report, size_t total) {
  report.total = total;
  report.selectedCount = report.selected.size();
  report.gainPercent = gainPercent(report.total, report.selectedCount);
}

} // namespace

SelectionReport select(const differ::ChangeSet &changes,
                       const runtime::TestSuite &suite, const TestMap &map) {
  SelectionReport report;
  for (const runtime::TestCase &test : suite) {
    const TestMapEntry *entry = map.find(test.name);
    std::optional<SelectionReason> reason;

    if (!entry || entry->methods.empty()) {
      reason = SelectionReason{SelectionReason::Kind::EmptyMap, {}};
    } else if (!entry->sourceDigest || *entry->sourceDigest != test.sourceDigest) {
      reason = SelectionReason{SelectionReason::Kind::TestChanged, {}};
    } else if (entry->lastOutcome == Outcome::Fail ||
               entry->lastOutcome == Outcome::Error ||
               entry->lastOutcome == Outcome::Timeout) {
      reason = SelectionReason{SelectionReason::Kind::PreviouslyFailed, {}};
    } else {
      for (const auto &[id, _] : changes.entries) {
        if (entry->methods.count(id)) {
          reason = SelectionReason{SelectionReason::Kind::HitMethod, id};
          break;
        }
      }
    }

    if (reason) {
      report.selected.push_back(test.name);
      report.reasons.emplace(test.name, *reason);
    }
  }
  finishReport(report, suite.size());
  return report;
}

SelectionReport selectAllFailSafe(const runtime::TestSuite &suite) {
  SelectionReport report;
  report.failSafe = true;
  for (const runtime::TestCase &test : suite) {
    report.selected.push_back(test.name);
    report.reasons.emplace(test.name,
                           SelectionReason{SelectionReason::Kind::FailSafe, {}});
  }
  finishReport(report, suite.size());
  return report;
}

TestMap updateEntry(TestMap map, const runtime::TestResult &result,
                    const std::string &digest) {
  TestMapEntry entry;
  entry.testName = result.test;
  entry.methods = runtime::traceToMapEntry(result.trace);
  entry.sourceDigest = digest;
  entry.lastOutcome = result.outcome;
  map.entries[result.test] = std::move(entry);
  return map;
}

TestMap pruneRemovedTests(TestMap map, const runtime::TestSuite &suite) {
  std::set<std::string> alive;
  for (const runtime::TestCase &test : suite)
    alive.insert(test.name);
  for (auto it = map.entries.begin(); it != map.entries.end();) {
    if (alive.count(it->first))
      ++it;
    else
      it = map.entries.erase(it);
  }
  return map;
}

std::string saveMap(const TestMap &map) {
  std::string out = "TIA-MAP v" + std::to_string(map.formatVersion) + "\n";
  for (const auto &[name, entry] : map.entries) {
    out += "TEST " + name + " " +
           (entry.sourceDigest ? *entry.sourceDigest : "-") + " " +
           outcomeText(entry.lastOutcome) + "\n";
    std::vector<std::string> lines;
    for (const MethodId &id : entry.methods)
      lines.push_back(id.canonical());
    std::sort(lines.begin(), lines.end());
    for (const std::string &line : lines)
      out += "  " + line + "\n";
  }
  return out;
}

TestMap loadMap(const std::string &bytes) {
  std::istringstream in(bytes);
  std::string line;
  int lineNo = 0;

  if (!std::getline(in, line))
    throw FormatError("empty map file", {1, 1});
  ++lineNo;
  if (line.rfind("TIA-MAP v", 0) != 0)
    throw FormatError("missing TIA-MAP header", {lineNo, 1});
  std::string version = line.substr(9);
  if (version != "1")
    throw VersionError("unsupported map format version '" + version + "'",
                       {lineNo, 1});

  TestMap map;
  map.formatVersion = 1;
  TestMapEntry *current = nullptr;

  while (std::getline(in, line)) {
    ++lineNo;
    if (line.rfind("TEST ", 0) == 0) {
      std::istringstream fields(line.substr(5));
      std::string name, digest, outcomeWord, extra;
      if (!(fields >> name >> digest >> outcomeWord) || (fields >> extra))
        throw FormatError("malformed TEST line", {lineNo, 1});
      auto outcome = outcomeFromText(outcomeWord);
      if (!outcome)
        throw FormatError("unknown outcome '" + outcomeWord + "'", {lineNo, 1});
      if ((digest == "-") != (*outcome == Outcome::Never))
        throw FormatError("digest and outcome disagree for test '" + name + "'",
                          {lineNo, 1});
      if (map.entries.count(name))
        throw FormatError("duplicate test '" + name + "'", {lineNo, 1});
      TestMapEntry entry;
      entry.testName = name;
      if (digest != "-")
        entry.sourceDigest = digest;
      entry.lastOutcome = *outcome;
      current = &map.entries.emplace(name, std::move(entry)).first->second;
    } else if (line.rfind("  ", 0) == 0) {
      if (!current)
        throw FormatError("method line before any TEST line", {lineNo, 1});
      if (current->lastOutcome == Outcome::Never)
        throw FormatError("methods listed for a never-run test", {lineNo, 1});
      auto id = MethodId::fromCanonical(line.substr(2));
      if (!id)
        throw FormatError("bad method id '" + line.substr(2) + "'",
                          {lineNo, 1});
      current->methods.insert(*id);
    } else if (line.empty()) {
      throw FormatError("blank line in map file", {lineNo, 1});
    } else {
      throw FormatError("unrecognized line", {lineNo, 1});
    }
  }
  return map;
}

} // namespace tia::mapstore
