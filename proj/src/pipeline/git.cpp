#include "tia/minij/parser.hpp"
#include "tia/pipeline/pipeline.hpp"

#include <array>
#include <cstdio>

namespace tia::pipeline {

namespace {

std::string shellQuote(const std::string &arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

struct CommandResult {
  int exitCode = -1;
  std::string output;
};

CommandResult runCommand(const std::string &command) {
  CommandResult result;
  FILE *pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe)
    return result;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), n);
  int status = pclose(pipe);
  result.exitCode = status < 0 ? -1 : WEXITSTATUS(status);
  return result;
}

CommandResult git(const fs::path &worktree, const std::string &args) {
  return runCommand("git -C " + shellQuote(worktree.string()) + " " + args);
}

std::vector<std::string> lines(const std::string &text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    auto end = nl == std::string::npos ? text.size() : nl;
    if (end > start)
      out.push_back(text.substr(start, end - start));
    if (nl == std::string::npos)
      break;
    start = nl + 1;
  }
  return out;
}

bool isMiniJ(const std::string &path) {
  return path.size() > 3 && path.compare(path.size() - 3, 3, ".mj") == 0;
}

} // namespace

AnalysisResult analyzeGit(const fs::path &worktree) {
  AnalysisResult result;
  try {
    // The commit being validated: candidate files of the last commit.
    CommandResult changed =
        git(worktree, "diff-tree --no-commit-id --name-only -r HEAD");
    if (changed.exitCode != 0)
      throw Error("git diff-tree failed in " + worktree.string());

    bool anyMiniJ = false;
    for (const std::string &name : lines(changed.output))
      anyMiniJ = anyMiniJ || isMiniJ(name);

    // New version: the checked-out work tree.
    std::map<std::string, std::string> newDigests = dirDigests(worktree);

    // Old version: materialized from the previous commit.
    minij::Program oldProgram;
    std::map<std::string, std::string> oldDigests;
    CommandResult parent = git(worktree, "rev-parse --verify -q HEAD^");
    if (parent.exitCode == 0) {
      CommandResult tree = git(worktree, "ls-tree -r --name-only HEAD^");
      if (tree.exitCode != 0)
        throw Error("git ls-tree failed in " + worktree.string());
      for (const std::string &name : lines(tree.output)) {
        if (!isMiniJ(name))
          continue;
        CommandResult show = git(worktree, "show " + shellQuote("HEAD^:" + name));
        if (show.exitCode != 0)
          throw Error("git show HEAD^:" + name + " failed");
        oldDigests[name] = minij::digestBytes(show.output);
        oldProgram.push_back(minij::parseUnit(show.output, name));
      }
    }

    result.delta = differ::fileDelta(oldDigests, newDigests);

    if (!anyMiniJ && parent.exitCode == 0) {
      // The last commit touched no MiniJ sources.
      return result;
    }

    minij::Program newProgram = loadProgram(worktree);
    result.changes = differ::diffMethods(oldProgram, newProgram);
  } catch (const Error &e) {
    result = {};
    result.failSafe = true;
    result.failReason = e.what();
  }
  return result;
}

} // namespace tia::pipeline
