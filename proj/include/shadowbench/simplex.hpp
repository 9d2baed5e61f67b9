#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "shadowbench/rng.hpp"
#include "shadowbench/types.hpp"

namespace shadowbench {

/// maximize <z, x> subject to <a_i, x> <= b_i.
struct LinearProgram {
  Mat A;  // n x d
  Vec b;  // n
  Vec z;  // d

  Index rows() const { return A.rows(); }
  Index dim() const { return A.cols(); }

  /// Canonical form with unit right-hand side.
  static LinearProgram canonical(Mat A, Vec z);
};

/// A vertex identified by its d tight rows.
struct VertexBasis {
  std::vector<int> tight_rows;  // sorted, size d
  Vec x;
};

enum class WalkTermination { optimal, unbounded, budget_exhausted };

/// Audit trail of a simplex walk. Consecutive vertices share exactly d-1
/// tight rows; validate() checks that and basis uniqueness.
struct WalkRecord {
  std::vector<VertexBasis> vertices;
  int pivot_count = 0;
  int degenerate_pivots = 0;
  WalkTermination terminated = WalkTermination::optimal;
  std::optional<Vec> ray;  // certificate when terminated == unbounded

  bool validate(Index d) const;
};

/// Factored state of one basis: solution, inverse, objective.
struct BasisState {
  std::vector<int> rows;  // sorted
  Vec x;
  Mat Ainv;  // inverse of A restricted to `rows` (in sorted order)
  double obj = 0.0;

  /// Edge direction that relaxes the tight row at basis position p.
  Vec direction(int p) const { return -Ainv.col(p); }
};

BasisState make_basis_state(const LinearProgram& lp, std::vector<int> rows);

/// One candidate pivot out of a vertex.
struct PivotCandidate {
  int relax_pos = -1;  // position in the sorted basis
  int relax_row = -1;
  int enter_row = -1;  // -1: no blocking row, the edge is an unbounded ray
  double step = 0.0;
  Vec direction;
  Vec x_new;
  double obj_new = 0.0;
  std::vector<int> basis_new;
};

/// The pivot that relaxes the basis row at position p (ratio test along its
/// edge; ties break to the lowest entering row index).
PivotCandidate pivot_at(const LinearProgram& lp, const BasisState& st, int p);

/// All d candidate pivots at a vertex (one per relaxable basis row).
std::vector<PivotCandidate> pivot_candidates(const LinearProgram& lp, const BasisState& st);

/// Rate of objective change per unit slack of each basis row: -Ainv^T z.
Vec reduced_costs(const Vec& objective, const BasisState& st);

class PivotRule {
 public:
  struct Decision {
    bool unbounded = false;
    bool degenerate = false;
    PivotCandidate pivot;  // meaningful when not unbounded
    Vec ray;               // meaningful when unbounded
  };

  virtual ~PivotRule() = default;
  virtual std::optional<Decision> choose(const LinearProgram& lp, const BasisState& st) = 0;
  virtual const char* name() const = 0;
};

/// Classical maximizing rule: move to the neighbor with the largest objective.
/// Ties break to the lowest entering row index.
class GreedyRule : public PivotRule {
 public:
  std::optional<Decision> choose(const LinearProgram& lp, const BasisState& st) override;
  const char* name() const override { return "greedy"; }
};

/// Moves to the improving neighbor with the *smallest* objective gain.
/// On the deformed cube this follows the monotone path through all vertices.
class LeastImprovementRule : public PivotRule {
 public:
  std::optional<Decision> choose(const LinearProgram& lp, const BasisState& st) override;
  const char* name() const override { return "least-improvement"; }
};

struct SolveResult {
  WalkRecord walk;
  VertexBasis optimum;  // valid when walk.terminated == optimal
  double objective = 0.0;
  std::optional<Vec> ray;  // certificate when unbounded
};

/// Runs the engine from a start vertex until the rule stops, the problem is
/// certified unbounded, or the budget runs out. budget 0 means 10 * 2^d.
SolveResult solve_with_rule(const LinearProgram& lp, const VertexBasis& start, PivotRule& rule,
                            long long budget = 0);

/// Adjacent vertices: one per relaxable row whose edge is blocked.
std::vector<VertexBasis> neighbors(const LinearProgram& lp, const VertexBasis& v);

enum class PhaseOneStatus { found, infeasible, not_pointed };

struct InitialVertexResult {
  PhaseOneStatus status = PhaseOneStatus::found;
  VertexBasis basis;          // valid when status == found
  double infeasibility = 0.0; // optimal auxiliary gap when infeasible
};

/// Phase I: a feasible vertex from scratch (auxiliary program plus a
/// deterministic crash to d tight rows). The stream only steers tie-breaking
/// directions, so the result is reproducible per (seed, label).
InitialVertexResult find_initial_vertex(const LinearProgram& lp, RngStream& rng);

/// True when v's rows are independent, solve A_I x = b_I holds, and x is
/// feasible for every row within tolerance.
bool check_vertex_basis(const LinearProgram& lp, const VertexBasis& v);

}  // namespace shadowbench
