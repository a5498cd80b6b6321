#include "tia/pipeline/pipeline.hpp"

#include "tia/minij/canonical.hpp"
#include "tia/minij/parser.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace tia::pipeline {

std::string readFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void writeFile(const fs::path &path, const std::string &content) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error("cannot write file: " + path.string());
  out << content;
  if (!out)
    throw Error("write failed: " + path.string());
}

CorpusLayout resolveLayout(const fs::path &corpusDir,
                           std::optional<fs::path> srcOverride,
                           std::optional<fs::path> mapOverride) {
  CorpusLayout layout;
  layout.srcDir = srcOverride ? *srcOverride : corpusDir / "src";
  layout.testDir = corpusDir / "tests";
  if (mapOverride) {
    layout.mapPath = *mapOverride;
  } else if (const char *env = std::getenv("TIA_MAP_PATH");
             env && *env != '\0') {
    layout.mapPath = env;
  } else {
    layout.mapPath = layout.testDir / "tia.map";
  }
  return layout;
}

namespace {

std::vector<fs::path> sourceFiles(const fs::path &dir) {
  std::vector<fs::path> files;
  if (!fs::exists(dir))
    throw Error("no such directory: " + dir.string());
  for (const auto &entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mj")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string relativeTo(const fs::path &file, const fs::path &dir) {
  return fs::relative(file, dir).generic_string();
}

} // namespace

minij::Program loadProgram(const fs::path &dir) {
  minij::Program program;
  for (const fs::path &file : sourceFiles(dir))
    program.push_back(minij::parseUnit(readFile(file), relativeTo(file, dir)));
  return program;
}

runtime::TestSuite loadSuite(const fs::path &dir) {
  runtime::TestSuite suite;
  for (const fs::path &file : sourceFiles(dir)) {
    runtime::TestSuite part =
        runtime::loadTestsFromSource(readFile(file), relativeTo(file, dir));
    for (auto &test : part) {
      for (const auto &existing : suite)
        if (existing.name == test.name)
          throw DeclarationError("duplicate test '" + test.name +
                                 "' across test files");
      suite.push_back(std::move(test));
    }
  }
  return suite;
}

std::map<std::string, std::string> dirDigests(const fs::path &dir) {
  std::map<std::string, std::string> digests;
  for (const fs::path &file : sourceFiles(dir))
    digests[relativeTo(file, dir)] = minij::digestBytes(readFile(file));
  return digests;
}

AnalysisResult analyzeSnapshots(const fs::path &oldDir,
                                const fs::path &newDir) {
  AnalysisResult result;
  try {
    result.delta = differ::fileDelta(dirDigests(oldDir), dirDigests(newDir));
    minij::Program oldProgram = loadProgram(oldDir);
    minij::Program newProgram = loadProgram(newDir);
    result.changes = differ::diffMethods(oldProgram, newProgram);
  } catch (const Error &e) {
    result.failSafe = true;
    result.failReason = e.what();
    result.changes = {};
  }
  return result;
}

void writeChangesFile(const fs::path &path, const AnalysisResult &analysis) {
  if (analysis.failSafe)
    writeFile(path, "!FAILSAFE " + analysis.failReason + "\n");
  else
    writeFile(path, differ::renderChanges(analysis.changes));
}

AnalysisResult readChangesFile(const fs::path &path) {
  AnalysisResult result;
  std::string text = readFile(path);
  if (text.rfind("!FAILSAFE", 0) == 0) {
    result.failSafe = true;
    std::string reason = text.substr(9);
    while (!reason.empty() && (reason.front() == ' '))
      reason.erase(reason.begin());
    while (!reason.empty() && (reason.back() == '\n' || reason.back() == '\r'))
      reason.pop_back();
    result.failReason = reason;
    return result;
  }
  result.changes = differ::parseChanges(text);
  return result;
}

namespace {

std::string nowTimestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string fileDigestOrDash(const fs::path &path) {
  if (!fs::exists(path))
    return "-";
  return minij::digestBytes(readFile(path));
}

} // namespace

MapLock::MapLock(const fs::path &mapPath) : lockPath_(mapPath) {
  lockPath_ += ".lock";
  if (lockPath_.has_parent_path())
    fs::create_directories(lockPath_.parent_path());
  if (fs::exists(lockPath_))
    throw Error("map is locked by another run: " + lockPath_.string());
  std::ofstream out(lockPath_);
  if (!out)
    throw Error("cannot create lock file: " + lockPath_.string());
  out << "locked\n";
}

MapLock::~MapLock() {
  std::error_code ec;
  fs::remove(lockPath_, ec);
}

mapstore::SelectionReport cmdSelect(const AnalysisResult &analysis,
                                    const CorpusLayout &layout) {
  runtime::TestSuite suite = loadSuite(layout.testDir);
  if (analysis.failSafe)
    return mapstore::selectAllFailSafe(suite);

  mapstore::TestMap map;
  if (fs::exists(layout.mapPath))
    map = mapstore::loadMap(readFile(layout.mapPath));
  return mapstore::select(analysis.changes, suite, map);
}

RunManifest cmdRun(const mapstore::SelectionReport &selection,
                   const CorpusLayout &layout, const RunOptions &options) {
  RunManifest manifest;
  manifest.mode = "run";
  manifest.timestamp = nowTimestamp();
  manifest.selection = selection;
  manifest.mapDigestBefore = fileDigestOrDash(layout.mapPath);
  manifest.mapDigestAfter = manifest.mapDigestBefore;

  runtime::TestSuite suite = loadSuite(layout.testDir);

  // The run aborts before any map modification when the program itself is
  // not runnable.
  std::optional<runtime::Runner> runner;
  try {
    minij::Program program = loadProgram(layout.srcDir);
    runner.emplace(program);

    MapLock lock(layout.mapPath);
    mapstore::TestMap map;
    if (fs::exists(layout.mapPath))
      map = mapstore::loadMap(readFile(layout.mapPath));
    map = mapstore::pruneRemovedTests(std::move(map), suite);

    bool allPassed = true;
    for (const runtime::TestCase &test : suite) {
      if (std::find(selection.selected.begin(), selection.selected.end(),
                    test.name) == selection.selected.end())
        continue;

      runtime::TestResult result;
      try {
        result = runner->runTest(test, options.filterPrefixes,
                                 options.stepBudget);
      } catch (const StaticCheckError &e) {
        // The test no longer checks against this version (e.g. it calls a
        // removed method); only this test is affected.
        result.test = test.name;
        result.trace.test = test.name;
        result.outcome = Outcome::Error;
        result.message = e.what();
      }

      map = mapstore::updateEntry(std::move(map), result, test.sourceDigest);
      writeFile(layout.mapPath, mapstore::saveMap(map)); // per-test flush

      if (options.traceDir) {
        std::string dump;
        for (const auto &record : result.trace.records)
          dump += runtime::renderRecord(record) + "\n";
        writeFile(*options.traceDir / (test.name + ".trace"), dump);
      }

      RunRecord record{test.name, result.outcome, result.stepsUsed,
                       result.message};
      manifest.executions.push_back(record);
      allPassed = allPassed && result.outcome == Outcome::Pass;
      if (options.onTestComplete)
        options.onTestComplete(record);
    }

    // Persist pruning even when nothing was selected, but never create a
    // map file on a no-op run.
    if (manifest.executions.empty() && fs::exists(layout.mapPath))
      writeFile(layout.mapPath, mapstore::saveMap(map));

    manifest.exitCode = allPassed ? 0 : 1;
  } catch (const Error &e) {
    manifest.abortReason = e.what();
    manifest.exitCode = 2;
    return manifest;
  }

  manifest.mapDigestAfter = fileDigestOrDash(layout.mapPath);
  return manifest;
}

RunManifest cmdPipeline(const fs::path &oldDir, const fs::path &newDir,
                        const CorpusLayout &layout, const RunOptions &options) {
  AnalysisResult analysis = analyzeSnapshots(oldDir, newDir);
  mapstore::SelectionReport selection = cmdSelect(analysis, layout);
  RunManifest manifest = cmdRun(selection, layout, options);
  manifest.mode = "pipeline";
  manifest.analysis = analysis;
  return manifest;
}

std::string renderManifest(const RunManifest &manifest) {
  std::string out = "TIA-MANIFEST v1\n";
  auto kv = [&out](const std::string &key, const std::string &value) {
    out += key + " " + value + "\n";
  };
  kv("mode", manifest.mode);
  kv("timestamp", manifest.timestamp);
  if (manifest.analysis.failSafe)
    kv("failsafe", manifest.analysis.failReason);
  kv("files-added", std::to_string(manifest.analysis.delta.added.size()));
  kv("files-removed", std::to_string(manifest.analysis.delta.removed.size()));
  kv("files-changed", std::to_string(manifest.analysis.delta.changed.size()));
  kv("changes", std::to_string(manifest.analysis.changes.entries.size()));
  std::string changesText = differ::renderChanges(manifest.analysis.changes);
  std::istringstream changeLines(changesText);
  std::string line;
  while (std::getline(changeLines, line))
    kv("change", line);
  kv("total", std::to_string(manifest.selection.total));
  kv("selected-count", std::to_string(manifest.selection.selectedCount));
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", manifest.selection.gainPercent);
    kv("gain", buf);
  }
  for (const std::string &name : manifest.selection.selected) {
    auto it = manifest.selection.reasons.find(name);
    kv("selected",
       name + "\t" +
           (it == manifest.selection.reasons.end()
                ? "?"
                : mapstore::reasonText(it->second)));
  }
  for (const RunRecord &r : manifest.executions)
    kv("exec", r.test + "\t" + outcomeText(r.outcome) + "\t" +
                   std::to_string(r.steps) +
                   (r.message.empty() ? "" : "\t" + r.message));
  kv("map-before", manifest.mapDigestBefore);
  kv("map-after", manifest.mapDigestAfter);
  if (!manifest.abortReason.empty())
    kv("aborted", manifest.abortReason);
  kv("exit", std::to_string(manifest.exitCode));
  return out;
}

RunManifest parseManifest(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  if (!std::getline(in, line) || line != "TIA-MANIFEST v1")
    throw FormatError("missing TIA-MANIFEST header", {1, 1});
  ++lineNo;

  RunManifest manifest;
  auto split2 = [](const std::string &s) {
    auto sp = s.find(' ');
    return std::pair<std::string, std::string>(
        s.substr(0, sp), sp == std::string::npos ? "" : s.substr(sp + 1));
  };

  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty())
      continue;
    auto [key, value] = split2(line);
    if (key == "mode") {
      manifest.mode = value;
    } else if (key == "timestamp") {
      manifest.timestamp = value;
    } else if (key == "failsafe") {
      manifest.analysis.failSafe = true;
      manifest.analysis.failReason = value;
    } else if (key == "change") {
      auto tab = value.find('\t');
      if (tab == std::string::npos)
        throw FormatError("malformed change line", {lineNo, 1});
      auto partial = differ::parseChanges(value + "\n");
      for (auto &[id, kinds] : partial.entries)
        manifest.analysis.changes.entries[id].insert(kinds.begin(),
                                                     kinds.end());
    } else if (key == "total") {
      manifest.selection.total = std::stoul(value);
    } else if (key == "selected-count") {
      manifest.selection.selectedCount = std::stoul(value);
    } else if (key == "gain") {
      manifest.selection.gainPercent = std::stod(value);
    } else if (key == "selected") {
      auto tab = value.find('\t');
      manifest.selection.selected.push_back(value.substr(0, tab));
    } else if (key == "exec") {
      std::vector<std::string> parts;
      size_t start = 0;
      while (start <= value.size()) {
        auto tab = value.find('\t', start);
        parts.push_back(value.substr(
            start, tab == std::string::npos ? std::string::npos : tab - start));
        if (tab == std::string::npos)
          break;
        start = tab + 1;
      }
      if (parts.size() < 3)
        throw FormatError("malformed exec line", {lineNo, 1});
      RunRecord r;
      r.test = parts[0];
      auto outcome = outcomeFromText(parts[1]);
      if (!outcome)
        throw FormatError("unknown outcome '" + parts[1] + "'", {lineNo, 1});
      r.outcome = *outcome;
      r.steps = std::stoll(parts[2]);
      if (parts.size() > 3)
        r.message = parts[3];
      manifest.executions.push_back(std::move(r));
    } else if (key == "map-before") {
      manifest.mapDigestBefore = value;
    } else if (key == "map-after") {
      manifest.mapDigestAfter = value;
    } else if (key == "aborted") {
      manifest.abortReason = value;
    } else if (key == "exit") {
      manifest.exitCode = std::stoi(value);
    } else if (key == "files-added" || key == "files-removed" ||
               key == "files-changed" || key == "changes") {
      // counts are reconstructible; accepted and ignored
    } else {
      throw FormatError("unknown manifest key '" + key + "'", {lineNo, 1});
    }
  }
  return manifest;
}

fs::path writeManifestFile(const fs::path &dir, const RunManifest &manifest) {
  fs::create_directories(dir);
  int next = 1;
  for (const auto &entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("run-", 0) == 0 && entry.path().extension() == ".txt") {
      int num = std::atoi(name.substr(4).c_str());
      next = std::max(next, num + 1);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "run-%06d.txt", next);
  fs::path path = dir / buf;
  writeFile(path, renderManifest(manifest));
  return path;
}

std::string summarizeManifest(const RunManifest &manifest) {
  std::ostringstream out;
  out << "mode: " << manifest.mode << "  (" << manifest.timestamp << ")\n";
  if (manifest.analysis.failSafe)
    out << "fail-safe: " << manifest.analysis.failReason << "\n";
  out << "modified methods: " << manifest.analysis.changes.entries.size()
      << "\n";
  for (const auto &[id, kinds] : manifest.analysis.changes.entries) {
    out << "  " << id.canonical() << " [";
    bool first = true;
    for (auto k : kinds) {
      if (!first)
        out << ",";
      out << differ::changeKindText(k);
      first = false;
    }
    out << "]\n";
  }
  out << "tests: " << manifest.selection.total << " total, "
      << manifest.selection.selectedCount << " selected, gain ";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", manifest.selection.gainPercent);
  out << buf << "\n";
  for (const RunRecord &r : manifest.executions) {
    out << "  " << r.test << ": " << outcomeText(r.outcome) << " (" << r.steps
        << " steps)";
    if (!r.message.empty())
      out << " - " << r.message;
    out << "\n";
  }
  if (!manifest.abortReason.empty())
    out << "aborted: " << manifest.abortReason << "\n";
  out << "exit: " << manifest.exitCode << "\n";
  return out.str();
}

} // namespace tia::pipeline
