#include "zmc/quadform.hpp"

#include <Eigen/Dense>

#include <algorithm>

#include "zmc/error.hpp"

namespace zmc {

QuadMatrix to_matrix(const Poly& f, const AmbientSig& sig) {
  if (f.nvars() != sig.nvars) throw Error(Errc::dimension, "to_matrix: polynomial and signature disagree on nvars");
  if (f.is_zero() || f.degree() != 2 || !f.is_homogeneous())
    throw Error(Errc::domain, "to_matrix: polynomial must be homogeneous of degree exactly 2");
  const auto n = static_cast<std::size_t>(f.nvars());
  QuadMatrix q{ExactMatrix(n, n), sig};
  const QuadExt half(mpq_class(1, 2));
  for (const auto& [m, c] : f.terms()) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      for (int e = 0; e < m[static_cast<int>(i)]; ++e) idx.push_back(i);
    if (idx[0] == idx[1]) {
      q.a(idx[0], idx[0]) = c;
    } else {
      q.a(idx[0], idx[1]) = c * half;
      q.a(idx[1], idx[0]) = c * half;
    }
  }
  return q;
}

Poly from_matrix(const QuadMatrix& q) {
  if (!q.a.is_symmetric()) throw Error(Errc::invalid_argument, "from_matrix: matrix is not symmetric");
  const int n = static_cast<int>(q.a.rows());
  Poly f(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const QuadExt& v = q.a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (v.is_zero()) continue;
      std::vector<int> e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] += 1;
      e[static_cast<std::size_t>(j)] += 1;
      f += Poly::monomial(Monomial(std::move(e)), i == j ? v : v * QuadExt(2));
    }
  return f;
}

int exact_rank(const ExactMatrix& input) {
  ExactMatrix m = input;
  const std::size_t rows = m.rows(), cols = m.cols();
  QuadExt prev(1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t piv = row;
    while (piv < rows && m(piv, col).is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(row, j));
    const QuadExt p = m(row, col);
    for (std::size_t i = row + 1; i < rows; ++i) {
      const QuadExt a = m(i, col);
      for (std::size_t j = col + 1; j < cols; ++j) m(i, j) = (p * m(i, j) - a * m(row, j)) / prev;
      m(i, col) = QuadExt{};
    }
    prev = p;
    ++row;
  }
  return static_cast<int>(row);
}

const char* to_string(Reducibility r) {
  switch (r) {
    case Reducibility::irreducible: return "irreducible";
    case Reducibility::reducible: return "reducible";
    case Reducibility::degenerate: return "degenerate";
  }
  return "?";
}

Reducibility reducibility_rank(const QuadMatrix& q) {
  const int r = exact_rank(q.a);
  if (r == 0) return Reducibility::degenerate;
  return r <= 2 ? Reducibility::reducible : Reducibility::irreducible;
}

std::vector<QuadExt> characteristic_polynomial(const ExactMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(Errc::dimension, "characteristic polynomial of a non-square matrix");
  if (n == 0) return {QuadExt(1)};
  // p holds det(lambda I - A_r) for the leading r x r block, highest degree first
  std::vector<QuadExt> p{QuadExt(1), -a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    // q = [1, -a_rr, -R C, -R M C, ..., -R M^{r-1} C]
    std::vector<QuadExt> q(r + 2);
    q[0] = QuadExt(1);
    q[1] = -a(r, r);
    std::vector<QuadExt> col(r);
    for (std::size_t i = 0; i < r; ++i) col[i] = a(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      QuadExt dot;
      for (std::size_t j = 0; j < r; ++j) dot += a(r, j) * col[j];
      q[k + 2] = -dot;
      if (k + 1 < r) {
        std::vector<QuadExt> next(r);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) next[i] += a(i, j) * col[j];
        col = std::move(next);
      }
    }
    std::vector<QuadExt> np(r + 2);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) np[i] += q[i - j] * p[j];
    p = std::move(np);
  }
  std::reverse(p.begin(), p.end());
  return p;
}

PencilInvariants pencil_invariants(const QuadMatrix& q) {
  const std::size_t n = q.a.rows();
  ExactMatrix ba = q.a;
  for (std::size_t i = 0; i < n; ++i)
    if (q.sig.metric_sign(static_cast<int>(i)) < 0)
      for (std::size_t j = 0; j < n; ++j) ba(i, j) = -ba(i, j);
  PencilInvariants out;
  out.charpoly = characteristic_polynomial(ba);

  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ba(i, j).to_double();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return out;
}

bool is_multiple_of_metric(const QuadMatrix& q) {
  const std::size_t n = q.a.rows();
  const QuadExt c = q.a(0, 0) * QuadExt(q.sig.metric_sign(0));
  if (c.is_zero()) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const QuadExt want = i == j ? c * QuadExt(q.sig.metric_sign(static_cast<int>(i))) : QuadExt{};
      if (q.a(i, j) != want) return false;
    }
  return true;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::matches_ads: return "matches_ads";
    case Verdict::not_in_family: return "not_in_family";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

Classification classify_candidate(const Poly& f, const AmbientSig& sig) {
  if (f.is_zero() || f.degree() != 2 || !f.is_homogeneous())
    throw Error(Errc::invalid_argument, "classify: polynomial must be homogeneous of degree 2");
  if (sig.s != 2 || sig.epsilon != -1) throw Error(Errc::invalid_argument, "classify: signature must be (2,-1)");

  Classification out;
  out.divides = conjecture_check(f, sig).divides;
  const QuadMatrix q = to_matrix(f, sig);
  out.reducibility = reducibility_rank(q);
  if (is_multiple_of_metric(q)) {
    out.verdict = Verdict::not_in_family;
    out.reason = "f is a multiple of <B_s x, x>, so f = 0 misses the pseudo-sphere";
    return out;
  }
  if (!out.divides) {
    out.verdict = Verdict::not_in_family;
    out.reason = "residual is not a multiple of f";
    return out;
  }
  if (out.reducibility != Reducibility::irreducible) {
    out.verdict = Verdict::not_in_family;
    out.reason = std::string("quadric is ") + to_string(out.reducibility);
    return out;
  }

  const auto target = pencil_invariants(q).charpoly;
  const int budget = sig.nvars - 2;  // m + n + k
  for (int m = 1; m <= budget; ++m)
    for (int n = 1; m + n <= budget; ++n) {
      const FamilySpec spec = FamilySpec::ads(m, n, budget - m - n);
      const QuadMatrix fq = to_matrix(make_poly(spec), spec.sig());
      if (pencil_invariants(fq).charpoly == target) out.all_matches.push_back(spec);
    }
  if (out.all_matches.empty()) {
    out.verdict = Verdict::inconclusive;
    out.reason = "no anti de Sitter quadric shares the pencil fingerprint";
  } else {
    out.verdict = Verdict::matches_ads;
    out.match = out.all_matches.front();
    out.reason = "pencil fingerprint equals " + out.match->name();
  }
  return out;
}

}  // namespace zmc
