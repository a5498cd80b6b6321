#include "tia/mutator/mutator.hpp"

#include "tia/differ/differ.hpp"
#include "tia/minij/canonical.hpp"
#include "tia/minij/checker.hpp"
#include "tia/minij/hierarchy.hpp"

#include <cassert>

namespace tia::mutator {

using namespace minij;

const char *operatorText(MutationOperator op) {
  switch (op) {
  case MutationOperator::ConditionalBoundary: return "ConditionalBoundary";
  case MutationOperator::NegateConditional: return "NegateConditional";
  case MutationOperator::MathOperatorReplace: return "MathOperatorReplace";
  case MutationOperator::Increment: return "Increment";
  case MutationOperator::ReturnValueMutate: return "ReturnValueMutate";
  case MutationOperator::RemoveCall: return "RemoveCall";
  case MutationOperator::InlineConstant: return "InlineConstant";
  }
  return "?";
}

std::set<MutationOperator> allOperators() {
  return {MutationOperator::ConditionalBoundary,
          MutationOperator::NegateConditional,
          MutationOperator::MathOperatorReplace,
          MutationOperator::Increment,
          MutationOperator::ReturnValueMutate,
          MutationOperator::RemoveCall,
          MutationOperator::InlineConstant};
}

std::optional<MutationOperator> operatorFromText(const std::string &text) {
  for (MutationOperator op : allOperators())
    if (text == operatorText(op))
      return op;
  return std::nullopt;
}

std::set<MutationOperator> parseOperatorList(const std::string &text) {
  if (text.empty() || text == "all")
    return allOperators();
  std::set<MutationOperator> ops;
  size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto end = comma == std::string::npos ? text.size() : comma;
    std::string word = text.substr(start, end - start);
    auto op = operatorFromText(word);
    if (!op)
      throw Error("unknown mutation operator '" + word + "'");
    ops.insert(*op);
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return ops;
}

namespace {

// One candidate rewrite position. Enumeration is purely structural so the
// numbering is identical on the original and on clones; applicability and
// operator filtering only decide which sites become mutants.
struct Site {
  int index = 0;
  MutationOperator op = MutationOperator::MathOperatorReplace;
  MethodId method;
  int stmtIndex = 0;
  std::string description;
  bool applicable = true;
};

BinaryOp boundaryPartner(BinaryOp op) {
  switch (op) {
  case BinaryOp::Lt: return BinaryOp::Le;
  case BinaryOp::Le: return BinaryOp::Lt;
  case BinaryOp::Gt: return BinaryOp::Ge;
  case BinaryOp::Ge: return BinaryOp::Gt;
  default: return op;
  }
}

BinaryOp negatePartner(BinaryOp op) {
  switch (op) {
  case BinaryOp::Lt: return BinaryOp::Ge;
  case BinaryOp::Le: return BinaryOp::Gt;
  case BinaryOp::Gt: return BinaryOp::Le;
  case BinaryOp::Ge: return BinaryOp::Lt;
  case BinaryOp::Eq: return BinaryOp::Ne;
  case BinaryOp::Ne: return BinaryOp::Eq;
  default: return op;
  }
}

BinaryOp mathPartner(BinaryOp op) {
  switch (op) {
  case BinaryOp::Add: return BinaryOp::Sub;
  case BinaryOp::Sub: return BinaryOp::Add;
  case BinaryOp::Mul: return BinaryOp::Div;
  case BinaryOp::Div: return BinaryOp::Mul;
  case BinaryOp::Mod: return BinaryOp::Mul;
  default: return op;
  }
}

bool isRelational(BinaryOp op) {
  return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt ||
         op == BinaryOp::Ge;
}

bool isEquality(BinaryOp op) { return op == BinaryOp::Eq || op == BinaryOp::Ne; }

bool isArithmetic(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul ||
         op == BinaryOp::Div || op == BinaryOp::Mod;
}

std::string opArrow(BinaryOp from, BinaryOp to) {
  return std::string(binaryOpText(from)) + " -> " + binaryOpText(to);
}

// Walks a program in a fixed order, either collecting site metadata
// (collect mode, on the original, with type info for applicability) or
// applying the rewrite at one target site (apply mode, on a clone).
class SiteWalker {
public:
  // Collect mode.
  SiteWalker(const CheckInfo *info, std::vector<Site> *out)
      : info_(info), out_(out), target_(-1) {}

  // Apply mode.
  explicit SiteWalker(int target) : target_(target) {}

  void walkProgram(Program &program) {
    for (SourceUnit &unit : program)
      for (ClassDecl &cls : unit.classes)
        for (MethodDecl &m : cls.methods)
          walkMethod(m, cls.name);
  }

  bool applied() const { return applied_; }

private:
  void walkMethod(MethodDecl &m, const std::string &className) {
    method_ = m.id(className);
    returnType_ = m.returnType;
    stmtIndex_ = 0;
    walkBlock(m.body);
  }

  void walkBlock(Block &b) {
    for (StmtPtr &sp : b.stmts)
      walkStmt(sp);
  }

  void walkStmt(StmtPtr &sp) {
    if (applied_)
      return;
    int myIndex = stmtIndex_++;
    Stmt &s = *sp;
    switch (s.kind) {
    case Stmt::Kind::VarDecl:
      if (s.expr)
        walkExpr(s.expr, myIndex);
      return;
    case Stmt::Kind::Assign:
      walkExpr(s.expr, myIndex);
      return;
    case Stmt::Kind::If:
      walkExpr(s.expr, myIndex);
      walkStmt(s.thenStmt);
      if (s.elseStmt)
        walkStmt(s.elseStmt);
      return;
    case Stmt::Kind::While:
      walkExpr(s.expr, myIndex);
      walkStmt(s.bodyStmt);
      return;
    case Stmt::Kind::Return:
      if (s.expr) {
        visitReturnSite(s, myIndex);
        walkExpr(s.expr, myIndex);
      }
      return;
    case Stmt::Kind::ExprStmt:
      if (s.expr->kind == Expr::Kind::Call &&
          atSite(MutationOperator::RemoveCall, myIndex, "remove call", true)) {
        // Replace the call statement with an empty block.
        auto empty = std::make_unique<Stmt>();
        empty->kind = Stmt::Kind::Nested;
        empty->pos = s.pos;
        sp = std::move(empty);
        return;
      }
      walkExpr(s.expr, myIndex);
      return;
    case Stmt::Kind::Print:
    case Stmt::Kind::Assert:
      walkExpr(s.expr, myIndex);
      return;
    case Stmt::Kind::Nested:
      walkBlock(s.block);
      return;
    }
  }

  void visitReturnSite(Stmt &s, int stmtIndex) {
    bool applicable = !returnType_.empty();
    std::string desc;
    if (returnType_ == kIntType)
      desc = "return x -> x + 1";
    else if (returnType_ == kBoolType)
      desc = "return x -> !x";
    else if (returnType_ == kStringType) {
      desc = "return x -> \"\"";
      applicable = applicable && !(s.expr->kind == Expr::Kind::StringLit &&
                                   s.expr->text.empty());
    } else {
      desc = "return x -> null";
      applicable = applicable && s.expr->kind != Expr::Kind::NullLit;
    }
    if (!atSite(MutationOperator::ReturnValueMutate, stmtIndex, desc,
                applicable))
      return;

    ExprPtr old = std::move(s.expr);
    if (returnType_ == kIntType) {
      auto one = std::make_unique<Expr>();
      one->kind = Expr::Kind::IntLit;
      one->pos = old->pos;
      one->intValue = 1;
      auto add = std::make_unique<Expr>();
      add->kind = Expr::Kind::Binary;
      add->pos = old->pos;
      add->bop = BinaryOp::Add;
      add->lhs = std::move(old);
      add->rhs = std::move(one);
      s.expr = std::move(add);
    } else if (returnType_ == kBoolType) {
      auto neg = std::make_unique<Expr>();
      neg->kind = Expr::Kind::Unary;
      neg->pos = old->pos;
      neg->uop = UnaryOp::Not;
      neg->lhs = std::move(old);
      s.expr = std::move(neg);
    } else if (returnType_ == kStringType) {
      auto lit = std::make_unique<Expr>();
      lit->kind = Expr::Kind::StringLit;
      lit->pos = old->pos;
      s.expr = std::move(lit);
    } else {
      auto lit = std::make_unique<Expr>();
      lit->kind = Expr::Kind::NullLit;
      lit->pos = old->pos;
      s.expr = std::move(lit);
    }
  }

  void walkExpr(ExprPtr &ep, int stmtIndex) {
    if (applied_)
      return;
    Expr &e = *ep;
    switch (e.kind) {
    case Expr::Kind::Binary: {
      if (isRelational(e.bop)) {
        BinaryOp to = boundaryPartner(e.bop);
        if (atSite(MutationOperator::ConditionalBoundary, stmtIndex,
                   opArrow(e.bop, to), true)) {
          e.bop = to;
          return;
        }
        BinaryOp neg = negatePartner(e.bop);
        if (atSite(MutationOperator::NegateConditional, stmtIndex,
                   opArrow(e.bop, neg), true)) {
          e.bop = neg;
          return;
        }
      } else if (isEquality(e.bop)) {
        BinaryOp neg = negatePartner(e.bop);
        if (atSite(MutationOperator::NegateConditional, stmtIndex,
                   opArrow(e.bop, neg), true)) {
          e.bop = neg;
          return;
        }
      } else if (isArithmetic(e.bop)) {
        BinaryOp to = mathPartner(e.bop);
        // String concatenation has no partner operator.
        bool applicable = true;
        if (e.bop == BinaryOp::Add && info_) {
          auto it = info_->exprTypes.find(e.lhs.get());
          applicable = it == info_->exprTypes.end() || it->second != kStringType;
        }
        if (atSite(MutationOperator::MathOperatorReplace, stmtIndex,
                   opArrow(e.bop, to), applicable)) {
          e.bop = to;
          return;
        }
      }
      walkExpr(e.lhs, stmtIndex);
      walkExpr(e.rhs, stmtIndex);
      return;
    }
    case Expr::Kind::Unary: {
      if (e.uop == UnaryOp::Neg &&
          atSite(MutationOperator::MathOperatorReplace, stmtIndex,
                 "-x -> x", true)) {
        ExprPtr inner = std::move(e.lhs);
        ep = std::move(inner);
        return;
      }
      walkExpr(e.lhs, stmtIndex);
      return;
    }
    case Expr::Kind::IntLit: {
      if (atSite(MutationOperator::Increment, stmtIndex,
                 std::to_string(e.intValue) + " -> " +
                     std::to_string(e.intValue + 1),
                 true)) {
        e.intValue = static_cast<long long>(
            static_cast<unsigned long long>(e.intValue) + 1);
        return;
      }
      long long replacement = e.intValue == 0 ? 1 : 0;
      if (atSite(MutationOperator::InlineConstant, stmtIndex,
                 std::to_string(e.intValue) + " -> " +
                     std::to_string(replacement),
                 true)) {
        e.intValue = replacement;
        return;
      }
      return;
    }
    case Expr::Kind::BoolLit: {
      if (atSite(MutationOperator::InlineConstant, stmtIndex,
                 e.boolValue ? "true -> false" : "false -> true", true)) {
        e.boolValue = !e.boolValue;
        return;
      }
      return;
    }
    case Expr::Kind::StringLit: {
      std::string desc = e.text.empty() ? "\"\" -> \"mut\"" : "\"...\" -> \"\"";
      if (atSite(MutationOperator::InlineConstant, stmtIndex, desc, true)) {
        e.text = e.text.empty() ? "mut" : "";
        return;
      }
      return;
    }
    case Expr::Kind::New:
      for (ExprPtr &a : e.args)
        walkExpr(a, stmtIndex);
      return;
    case Expr::Kind::Call:
      if (e.receiver)
        walkExpr(e.receiver, stmtIndex);
      for (ExprPtr &a : e.args)
        walkExpr(a, stmtIndex);
      return;
    default:
      return;
    }
  }

  // In collect mode, records the site and returns false. In apply mode,
  // returns true exactly at the target site.
  bool atSite(MutationOperator op, int stmtIndex, const std::string &desc,
              bool applicable) {
    int index = counter_++;
    if (target_ < 0) {
      out_->push_back({index, op, method_, stmtIndex, desc, applicable});
      return false;
    }
    if (index == target_) {
      applied_ = true;
      return true;
    }
    return false;
  }

  const CheckInfo *info_ = nullptr;
  std::vector<Site> *out_ = nullptr;
  int target_ = -1;
  int counter_ = 0;
  bool applied_ = false;
  MethodId method_;
  std::string returnType_;
  int stmtIndex_ = 0;
};

} // namespace

std::vector<Mutant>
generateMutants(const Program &program,
                const std::set<MutationOperator> &operators,
                const std::optional<std::set<MethodId>> &coverage) {
  ClassHierarchy h = buildHierarchy(program);
  CheckInfo info = checkProgram(program, h);

  std::vector<Site> sites;
  {
    Program &mutableProgram = const_cast<Program &>(program);
    SiteWalker collector(&info, &sites);
    collector.walkProgram(mutableProgram);
  }

  // Original body tokens, for skipping no-op rewrites.
  std::map<MethodId, std::vector<std::string>> originalBodies;
  for (const SourceUnit &unit : program)
    for (const ClassDecl &cls : unit.classes)
      for (const MethodDecl &m : cls.methods)
        originalBodies[m.id(cls.name)] = canonicalBody(m);

  std::vector<Mutant> mutants;
  int nextId = 1;
  for (const Site &site : sites) {
    if (!site.applicable || !operators.count(site.op))
      continue;
    if (coverage && !coverage->count(site.method))
      continue;

    Program mutated = cloneProgram(program);
    SiteWalker applier(site.index);
    applier.walkProgram(mutated);
    assert(applier.applied() && "site numbering diverged between walks");

    // Skip rewrites that did not change the method body.
    bool changed = false;
    for (const SourceUnit &unit : mutated) {
      for (const ClassDecl &cls : unit.classes) {
        for (const MethodDecl &m : cls.methods) {
          MethodId id = m.id(cls.name);
          if (id == site.method && canonicalBody(m) != originalBodies[id]) {
            changed = true;
            break;
          }
        }
      }
    }
    if (!changed)
      continue;

    Mutant mutant;
    mutant.id = nextId++;
    mutant.op = site.op;
    mutant.method = site.method;
    mutant.stmtIndex = site.stmtIndex;
    mutant.description = site.description;
    mutant.program = std::move(mutated);
    mutants.push_back(std::move(mutant));
  }
  return mutants;
}

namespace {

bool killed(Outcome outcome) { return outcome != Outcome::Pass; }

} // namespace

EvalSummary evaluate(const Program &program, const runtime::TestSuite &suite,
                     const std::set<MutationOperator> &operators,
                     bool coverageFilter, long long stepBudget) {
  EvalSummary summary;

  // Fresh baseline: run the whole suite on the original program.
  runtime::Runner original(program);
  std::set<MethodId> coverageUnion;
  for (const runtime::TestCase &test : suite) {
    runtime::TestResult result = original.runTest(test, {}, stepBudget);
    summary.baselineGreen =
        summary.baselineGreen && result.outcome == Outcome::Pass;
    const auto methods = runtime::traceToMapEntry(result.trace);
    coverageUnion.insert(methods.begin(), methods.end());
    summary.baseline = mapstore::updateEntry(std::move(summary.baseline),
                                             result, test.sourceDigest);
  }

  std::optional<std::set<MethodId>> coverage;
  if (coverageFilter)
    coverage = coverageUnion;

  std::vector<Mutant> mutants = generateMutants(program, operators, coverage);

  for (const Mutant &mutant : mutants) {
    // A mutant that does not pass static checks is discarded, not scored.
    std::optional<runtime::Runner> runner;
    try {
      runner.emplace(mutant.program);
    } catch (const Error &) {
      ++summary.discarded;
      continue;
    }

    MutantOutcome row;
    row.id = mutant.id;
    row.op = mutant.op;
    row.location = mutant.location();

    for (const runtime::TestCase &test : suite) {
      runtime::TestResult result;
      try {
        result = runner->runTest(test, {}, stepBudget);
      } catch (const StaticCheckError &) {
        result.outcome = Outcome::Error;
      }
      if (killed(result.outcome)) {
        row.killedByWhole = true;
        break;
      }
    }

    differ::ChangeSet h = differ::diffMethods(program, mutant.program);
    mapstore::SelectionReport selection =
        mapstore::select(h, suite, summary.baseline);
    row.selectedTests = selection.selected;
    row.gainPercent = selection.gainPercent;

    for (const runtime::TestCase &test : suite) {
      if (std::find(selection.selected.begin(), selection.selected.end(),
                    test.name) == selection.selected.end())
        continue;
      runtime::TestResult result;
      try {
        result = runner->runTest(test, {}, stepBudget);
      } catch (const StaticCheckError &) {
        result.outcome = Outcome::Error;
      }
      if (killed(result.outcome)) {
        row.killedBySelected = true;
        break;
      }
    }

    summary.rows.push_back(std::move(row));
  }

  for (const MutantOutcome &row : summary.rows) {
    if (row.killedByWhole) {
      ++summary.killedByWholeCount;
      if (!row.killedBySelected)
        ++summary.missedCount;
    }
    summary.meanGainPercent += row.gainPercent;
  }
  if (!summary.rows.empty()) {
    summary.missedPercent =
        100.0 * static_cast<double>(summary.missedCount) /
        static_cast<double>(summary.rows.size());
    summary.meanGainPercent /= static_cast<double>(summary.rows.size());
  }
  return summary;
}

std::string renderMatrixTsv(const EvalSummary &summary) {
  std::string out =
      "id\toperator\tlocation\tkilledByWhole\tselectedCount\tkilledBySelected\n";
  for (const MutantOutcome &row : summary.rows) {
    out += std::to_string(row.id);
    out += '\t';
    out += operatorText(row.op);
    out += '\t';
    out += row.location;
    out += '\t';
    out += row.killedByWhole ? "true" : "false";
    out += '\t';
    out += std::to_string(row.selectedTests.size());
    out += '\t';
    out += row.killedBySelected ? "true" : "false";
    out += '\n';
  }
  return out;
}

} // namespace tia::mutator
