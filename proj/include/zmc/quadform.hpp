#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "zmc/exact_matrix.hpp"
#include "zmc/families.hpp"
#include "zmc/poly.hpp"
#include "zmc/zmccalc.hpp"

namespace zmc {

/// Symmetric A with f(x) = <A x, x>, paired with the ambient signature.
struct QuadMatrix {
  ExactMatrix a;
  AmbientSig sig;
};

QuadMatrix to_matrix(const Poly& f, const AmbientSig& sig);
Poly from_matrix(const QuadMatrix& q);

/// Rank over Q(sqrt(d)) by fraction-free (Bareiss) elimination.
int exact_rank(const ExactMatrix& m);

enum class Reducibility { irreducible, reducible, degenerate };

const char* to_string(Reducibility r);

/// rank >= 3 irreducible, rank 1..2 a product of linear forms, rank 0 degenerate.
Reducibility reducibility_rank(const QuadMatrix& q);

/// Coefficients c_0..c_n of det(lambda I - M), lowest degree first, by the
/// division-free Berkowitz recurrence.
std::vector<QuadExt> characteristic_polynomial(const ExactMatrix& m);

struct PencilInvariants {
  std::vector<QuadExt> charpoly;                  // of B_s A, lowest degree first
  std::vector<std::complex<double>> eigenvalues;  // floating roots, sorted
};

/// B_s A is conjugated by any isometry M (M^T B_s M = B_s), so its spectrum is
/// a congruence fingerprint of the quadric.
PencilInvariants pencil_invariants(const QuadMatrix& q);

/// True when A = c B_s for some c != 0: then f = c <B_s x, x> = c eps on the
/// pseudo-sphere and the surface is empty.
bool is_multiple_of_metric(const QuadMatrix& q);

enum class Verdict { matches_ads, not_in_family, inconclusive };

const char* to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::inconclusive;
  bool divides = false;
  Reducibility reducibility = Reducibility::degenerate;
  std::optional<FamilySpec> match;
  std::vector<FamilySpec> all_matches;
  std::string reason;
};

/// Matches an order-two polynomial in K_{2,-1} against the anti de Sitter
/// quadric family by divisibility, rank and pencil fingerprint, searching all
/// (m, n, k) with m + n + k = nvars - 2 (none exist below four variables).
Classification classify_candidate(const Poly& f, const AmbientSig& sig);

}  // namespace zmc
