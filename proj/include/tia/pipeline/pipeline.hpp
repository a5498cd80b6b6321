#pragma once

#include "tia/differ/differ.hpp"
#include "tia/mapstore/mapstore.hpp"
#include "tia/minij/ast.hpp"
#include "tia/runtime/interpreter.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tia::pipeline {

namespace fs = std::filesystem;

// Where a corpus keeps its pieces: program sources, test sources, and the
// committed map. The map lives with the tests by default; TIA_MAP_PATH or
// an explicit flag overrides it.
struct CorpusLayout {
  fs::path srcDir;
  fs::path testDir;
  fs::path mapPath;
};

// Resolves `<corpusDir>/src`, `<corpusDir>/tests`, `<corpusDir>/tests/tia.map`
// with optional overrides; the TIA_MAP_PATH environment variable wins over
// the default but not over `mapOverride`.
CorpusLayout resolveLayout(const fs::path &corpusDir,
                           std::optional<fs::path> srcOverride = {},
                           std::optional<fs::path> mapOverride = {});

// Parses every `.mj` file under `dir` (sorted by path, recursively).
minij::Program loadProgram(const fs::path &dir);

// Loads all tests under `dir`; test names must be unique across files.
runtime::TestSuite loadSuite(const fs::path &dir);

// path -> content digest for every `.mj` file under `dir`.
std::map<std::string, std::string> dirDigests(const fs::path &dir);

// Stage I output: either a change set or a fail-safe directive that forces
// downstream selection to take every test.
struct AnalysisResult {
  bool failSafe = false;
  std::string failReason;
  differ::ChangeSet changes;
  differ::FileDelta delta;
};

// Snapshot backend: two directories of sources.
AnalysisResult analyzeSnapshots(const fs::path &oldDir, const fs::path &newDir);

// Git backend: the work tree holds the new version (HEAD); the old version
// is materialized from HEAD^. Candidate files come from
// `git diff-tree --no-commit-id --name-only -r HEAD`.
AnalysisResult analyzeGit(const fs::path &worktree);

// changes.txt: rendered change set, or a single `!FAILSAFE <reason>` line.
void writeChangesFile(const fs::path &path, const AnalysisResult &analysis);
AnalysisResult readChangesFile(const fs::path &path);

struct RunRecord {
  std::string test;
  Outcome outcome = Outcome::Pass;
  long long steps = 0;
  std::string message;
};

struct RunManifest {
  std::string mode; // analyze | select | run | pipeline
  std::string timestamp;
  AnalysisResult analysis;
  mapstore::SelectionReport selection;
  std::vector<RunRecord> executions;
  std::string mapDigestBefore = "-";
  std::string mapDigestAfter = "-";
  std::string abortReason; // non-empty when the run stage never started
  int exitCode = 0;
};

std::string renderManifest(const RunManifest &manifest);
RunManifest parseManifest(const std::string &text); // throws FormatError

// Writes `run-NNNNNN.txt` into `dir` (next free sequence number) and
// returns the path.
fs::path writeManifestFile(const fs::path &dir, const RunManifest &manifest);

// Human-readable summary for `tia report`.
std::string summarizeManifest(const RunManifest &manifest);

struct RunOptions {
  std::vector<std::string> filterPrefixes;
  long long stepBudget = runtime::kDefaultStepBudget;
  std::optional<fs::path> traceDir; // per-test `<name>.trace` dumps
  // Invoked after each executed test, once its map entry is flushed.
  std::function<void(const RunRecord &)> onTestComplete;
};

// Stage II over a changes result: fail-safe or fresh maps select everything.
mapstore::SelectionReport cmdSelect(const AnalysisResult &analysis,
                                    const CorpusLayout &layout);

// Stage III: runs the selected tests in suite order against the corpus
// program, flushing the map entry of each test as it completes. Exit code 0
// iff every executed test passed; a broken program aborts before any map
// modification. Holds the map lock for the duration.
RunManifest cmdRun(const mapstore::SelectionReport &selection,
                   const CorpusLayout &layout, const RunOptions &options = {});

// Stages I-III in one call (snapshot backend).
RunManifest cmdPipeline(const fs::path &oldDir, const fs::path &newDir,
                        const CorpusLayout &layout,
                        const RunOptions &options = {});

// Advisory single-writer lock on the map file; `<mapPath>.lock`.
class MapLock {
public:
  explicit MapLock(const fs::path &mapPath);
  ~MapLock();
  MapLock(const MapLock &) = delete;
  MapLock &operator=(const MapLock &) = delete;

private:
  fs::path lockPath_;
};

// Small file helpers shared by the CLI.
std::string readFile(const fs::path &path);
void writeFile(const fs::path &path, const std::string &content);

} // namespace tia::pipeline
