// tia - test impact analysis pipeline for MiniJ corpora.

#include "tia/mutator/mutator.hpp"
#include "tia/pipeline/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using namespace tia;

struct LayoutFlags {
  std::string corpus;
  std::string src;
  std::string map;
  std::string manifestDir;

  pipeline::CorpusLayout resolve() const {
    std::optional<fs::path> srcOverride;
    if (!src.empty())
      srcOverride = fs::path(src);
    std::optional<fs::path> mapOverride;
    if (!map.empty())
      mapOverride = fs::path(map);
    return pipeline::resolveLayout(corpus, srcOverride, mapOverride);
  }

  fs::path manifests(const pipeline::CorpusLayout &layout) const {
    if (!manifestDir.empty())
      return manifestDir;
    return layout.mapPath.parent_path() / "tia-runs";
  }
};

void addLayoutFlags(CLI::App *cmd, LayoutFlags &flags) {
  cmd->add_option("--corpus", flags.corpus,
                  "corpus root (expects src/ and tests/)")
      ->required();
  cmd->add_option("--src", flags.src, "override the program source directory");
  cmd->add_option("--map", flags.map,
                  "map file (default <corpus>/tests/tia.map, or TIA_MAP_PATH)");
  cmd->add_option("--manifest-dir", flags.manifestDir,
                  "where run manifests are written");
}

std::vector<std::string> splitCommas(const std::string &text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size() && !text.empty()) {
    auto comma = text.find(',', start);
    auto end = comma == std::string::npos ? text.size() : comma;
    if (end > start)
      out.push_back(text.substr(start, end - start));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

int finishRun(const pipeline::RunManifest &manifest, const fs::path &dir) {
  fs::path path = pipeline::writeManifestFile(dir, manifest);
  std::cout << pipeline::summarizeManifest(manifest);
  std::cout << "manifest: " << path.string() << "\n";
  return manifest.exitCode;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"tia - method-level test impact analysis for MiniJ"};
  app.require_subcommand(1);

  // analyze
  auto *analyze = app.add_subcommand(
      "analyze", "compute the modified-method set between two versions");
  std::string oldDir, newDir, gitTree, changesOut = "changes.txt";
  analyze->add_option("--old", oldDir, "old snapshot directory");
  analyze->add_option("--new", newDir, "new snapshot directory");
  analyze->add_option("--git", gitTree,
                      "git work tree; compares HEAD against HEAD^");
  analyze->add_option("--out", changesOut, "output file (default changes.txt)");

  // select
  auto *select = app.add_subcommand("select", "select impacted tests");
  LayoutFlags selectFlags;
  std::string changesIn = "changes.txt";
  select->add_option("--changes", changesIn, "changes file from analyze");
  addLayoutFlags(select, selectFlags);

  // run
  auto *run = app.add_subcommand(
      "run", "execute tests with tracing and refresh the map");
  LayoutFlags runFlags;
  std::string runChanges;
  std::string filterText;
  long long stepBudget = runtime::kDefaultStepBudget;
  std::string traceDir;
  run->add_option("--changes", runChanges,
                  "changes file; when omitted every test runs");
  run->add_option("--filter", filterText,
                  "comma-separated class-name prefixes to trace");
  run->add_option("--step-budget", stepBudget, "interpreter step budget");
  run->add_option("--trace-dir", traceDir, "write per-test .trace dumps here");
  addLayoutFlags(run, runFlags);

  // pipeline
  auto *pipe = app.add_subcommand(
      "pipeline", "analyze, select and run in one invocation");
  LayoutFlags pipeFlags;
  std::string pipeOld, pipeNew, pipeFilter, pipeTraceDir;
  long long pipeBudget = runtime::kDefaultStepBudget;
  pipe->add_option("--old", pipeOld, "old snapshot directory")->required();
  pipe->add_option("--new", pipeNew,
                   "new snapshot directory (default <corpus>/src)");
  pipe->add_option("--filter", pipeFilter,
                   "comma-separated class-name prefixes to trace");
  pipe->add_option("--step-budget", pipeBudget, "interpreter step budget");
  pipe->add_option("--trace-dir", pipeTraceDir,
                   "write per-test .trace dumps here");
  addLayoutFlags(pipe, pipeFlags);

  // report
  auto *report = app.add_subcommand("report", "summarize a run manifest");
  std::string manifestFile;
  report->add_option("--manifest", manifestFile, "manifest file")->required();

  // mutate
  auto *mutate = app.add_subcommand(
      "mutate", "mutation-score the selection against the whole suite");
  LayoutFlags mutateFlags;
  std::string operatorsText = "all";
  std::string matrixOut = "matrix.tsv";
  bool noCoverageFilter = false;
  long long mutateBudget = runtime::kDefaultStepBudget;
  mutate->add_option("--operators", operatorsText,
                     "comma-separated operator names, or 'all'");
  mutate->add_option("--out", matrixOut, "kill matrix TSV output");
  mutate->add_flag("--no-coverage-filter", noCoverageFilter,
                   "mutate uncovered methods too");
  mutate->add_option("--step-budget", mutateBudget,
                     "interpreter step budget");
  addLayoutFlags(mutate, mutateFlags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      pipeline::AnalysisResult result;
      if (!gitTree.empty()) {
        result = pipeline::analyzeGit(gitTree);
      } else if (!oldDir.empty() && !newDir.empty()) {
        result = pipeline::analyzeSnapshots(oldDir, newDir);
      } else {
        std::cerr << "analyze needs --git, or both --old and --new\n";
        return 2;
      }
      pipeline::writeChangesFile(changesOut, result);
      if (result.failSafe) {
        std::cerr << "analysis failed, wrote fail-safe directive: "
                  << result.failReason << "\n";
      } else {
        std::cout << "modified methods: " << result.changes.entries.size()
                  << " -> " << changesOut << "\n";
      }
      return 0;
    }

    if (select->parsed()) {
      auto layout = selectFlags.resolve();
      auto analysis = pipeline::readChangesFile(changesIn);
      auto selection = pipeline::cmdSelect(analysis, layout);
      pipeline::RunManifest manifest;
      manifest.mode = "select";
      manifest.analysis = analysis;
      manifest.selection = selection;
      fs::path path =
          pipeline::writeManifestFile(selectFlags.manifests(layout), manifest);
      std::cout << "selected " << selection.selectedCount << " of "
                << selection.total << " tests (gain ";
        {
          char buf[32];
          std::snprintf(buf, sizeof(buf), "%.2f%%", selection.gainPercent);
          std::cout << buf;
        }
      std::cout << ")\nmanifest: " << path.string() << "\n";
      return 0;
    }

    if (run->parsed()) {
      auto layout = runFlags.resolve();
      mapstore::SelectionReport selection;
      pipeline::AnalysisResult analysis;
      if (!runChanges.empty()) {
        analysis = pipeline::readChangesFile(runChanges);
        selection = pipeline::cmdSelect(analysis, layout);
      } else {
        selection = mapstore::selectAllFailSafe(pipeline::loadSuite(layout.testDir));
      }
      pipeline::RunOptions options;
      options.filterPrefixes = splitCommas(filterText);
      options.stepBudget = stepBudget;
      if (!traceDir.empty())
        options.traceDir = fs::path(traceDir);
      auto manifest = pipeline::cmdRun(selection, layout, options);
      manifest.analysis = analysis;
      return finishRun(manifest, runFlags.manifests(layout));
    }

    if (pipe->parsed()) {
      auto layout = pipeFlags.resolve();
      if (!pipeNew.empty())
        layout.srcDir = pipeNew;
      pipeline::RunOptions options;
      options.filterPrefixes = splitCommas(pipeFilter);
      options.stepBudget = pipeBudget;
      if (!pipeTraceDir.empty())
        options.traceDir = fs::path(pipeTraceDir);
      auto manifest =
          pipeline::cmdPipeline(pipeOld, layout.srcDir, layout, options);
      return finishRun(manifest, pipeFlags.manifests(layout));
    }

    if (report->parsed()) {
      auto manifest =
          pipeline::parseManifest(pipeline::readFile(manifestFile));
      std::cout << pipeline::summarizeManifest(manifest);
      return 0;
    }

    if (mutate->parsed()) {
      auto layout = mutateFlags.resolve();
      auto operators = mutator::parseOperatorList(operatorsText);
      auto program = pipeline::loadProgram(layout.srcDir);
      auto suite = pipeline::loadSuite(layout.testDir);
      auto summary = mutator::evaluate(program, suite, operators,
                                       !noCoverageFilter, mutateBudget);
      pipeline::writeFile(matrixOut, mutator::renderMatrixTsv(summary));
      if (!summary.baselineGreen)
        std::cerr << "warning: the suite does not pass on the original "
                     "program; kill results are unreliable\n";
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "%zu mutants (%d discarded), killed by whole suite: %zu, "
                    "missed by selection: %zu (%.2f%%), mean gain %.2f%%\n",
                    summary.rows.size(), summary.discarded,
                    summary.killedByWholeCount, summary.missedCount,
                    summary.missedPercent, summary.meanGainPercent);
      std::cout << buf << "matrix: " << matrixOut << "\n";
      return summary.missedCount == 0 ? 0 : 1;
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
