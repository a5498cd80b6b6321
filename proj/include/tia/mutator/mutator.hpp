#pragma once

#include "tia/mapstore/mapstore.hpp"
#include "tia/method_id.hpp"
#include "tia/minij/ast.hpp"
#include "tia/runtime/interpreter.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tia::mutator {

// Pure AST rewrites, one applied per mutant. The exact rewrite tables are
// frozen in docs/mutation-operators.md.
enum class MutationOperator {
  ConditionalBoundary,
  NegateConditional,
  MathOperatorReplace,
  Increment,
  ReturnValueMutate,
  RemoveCall,
  InlineConstant,
};

const char *operatorText(MutationOperator op);
std::optional<MutationOperator> operatorFromText(const std::string &text);
std::set<MutationOperator> allOperators();

// Parses "all" or a comma-separated list of operator names.
std::set<MutationOperator> parseOperatorList(const std::string &text);

struct Mutant {
  int id = 0;
  MutationOperator op = MutationOperator::MathOperatorReplace;
  MethodId method;
  int stmtIndex = 0;          // preorder statement index within the body
  std::string description;    // e.g. "+ -> -"
  minij::Program program;     // differs from the original in exactly one body

  std::string location() const {
    return method.canonical() + "#" + std::to_string(stmtIndex);
  }
};

// Deterministic enumeration: fixed AST traversal order and fixed
// per-operator order at each site; ids are stable across runs. When
// `coverage` is given, only methods in it are mutated. Rewrites that would
// leave the body unchanged are skipped.
std::vector<Mutant>
generateMutants(const minij::Program &program,
                const std::set<MutationOperator> &operators,
                const std::optional<std::set<MethodId>> &coverage);

struct MutantOutcome {
  int id = 0;
  MutationOperator op = MutationOperator::MathOperatorReplace;
  std::string location;
  bool killedByWhole = false;
  bool killedBySelected = false;
  std::vector<std::string> selectedTests;
  double gainPercent = 0.0;
};

struct EvalSummary {
  std::vector<MutantOutcome> rows;
  int discarded = 0; // mutants that failed static checks, kept out of rows
  size_t killedByWholeCount = 0;
  size_t missedCount = 0; // killed by whole suite, missed by selected
  double missedPercent = 0.0;
  double meanGainPercent = 0.0;
  bool baselineGreen = true; // whole suite passed on the original program
  mapstore::TestMap baseline;
};

// The full campaign: builds a fresh baseline map by running the whole suite
// on the original program, then for every mutant compares kills of the
// whole suite against kills of the selected-only suite.
EvalSummary evaluate(const minij::Program &program,
                     const runtime::TestSuite &suite,
                     const std::set<MutationOperator> &operators,
                     bool coverageFilter = true,
                     long long stepBudget = runtime::kDefaultStepBudget);

// One row per mutant: id, operator, location, killedByWhole, |selected|,
// killedBySelected.
std::string renderMatrixTsv(const EvalSummary &summary);

} // namespace tia::mutator
