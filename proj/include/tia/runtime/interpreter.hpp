#pragma once

#include "tia/method_id.hpp"
#include "tia/minij/ast.hpp"
#include "tia/minij/checker.hpp"
#include "tia/minij/hierarchy.hpp"
#include "tia/outcome.hpp"

#include <set>
#include <string>
#include <vector>

namespace tia::runtime {

inline constexpr long long kDefaultStepBudget = 1'000'000;

// A parameterless top-level procedure from a test source file.
struct TestCase {
  std::string name;
  minij::Block body;
  std::string sourceDigest; // digest of the canonical body tokens
};

using TestSuite = std::vector<TestCase>;

// One method entry, recorded at dispatch time: `target` is the method the
// call actually bound to after dynamic dispatch, not the statically
// resolved one. Runtime argument types are captured for trace-dump parity
// but identity lives entirely in `target`.
struct InvocationRecord {
  MethodId target;
  std::vector<std::string> argTypes;
  std::string returnType; // "" for void and constructors
};

// `Class.method(T1,T2)Ret`; void renders as `V`, constructors as
// `Class.Class(...)V`.
std::string renderRecord(const InvocationRecord &r);

struct Trace {
  std::string test;
  std::vector<InvocationRecord> records;

  std::set<MethodId> methodSet() const {
    std::set<MethodId> out;
    for (const auto &r : records)
      out.insert(r.target);
    return out;
  }
};

// The map entry a trace contributes: the deduplicated set of executed
// methods.
std::set<MethodId> traceToMapEntry(const Trace &trace);

struct TestResult {
  std::string test;
  Outcome outcome = Outcome::Pass;
  Trace trace;
  long long stepsUsed = 0;
  std::string message;              // failure or error detail
  std::vector<std::string> output;  // print lines in emission order
};

// Executes tests of one program version. Construction builds the hierarchy
// and statically checks every method body; each runTest additionally checks
// the test body and throws StaticCheckError before execution begins if it
// does not type-check against the program.
class Runner {
public:
  explicit Runner(const minij::Program &program);

  // Runs one test with invocation tracing. `filterPrefixes`, when
  // non-empty, restricts recording to classes whose name starts with one
  // of the prefixes. Deterministic: identical inputs yield identical
  // results. Never throws for runtime faults; those become the outcome.
  TestResult runTest(const TestCase &test,
                     const std::vector<std::string> &filterPrefixes = {},
                     long long stepBudget = kDefaultStepBudget) const;

  const minij::ClassHierarchy &hierarchy() const { return hierarchy_; }

private:
  const minij::Program &program_;
  minij::ClassHierarchy hierarchy_;
  minij::CheckInfo programInfo_;
};

// Convenience wrapper for one-off runs.
TestResult runTest(const minij::Program &program, const TestCase &test,
                   const std::vector<std::string> &filterPrefixes = {},
                   long long stepBudget = kDefaultStepBudget);

// Parses and digests all tests of one test source file.
TestSuite loadTestsFromSource(std::string_view source, const std::string &path);

} // namespace tia::runtime
