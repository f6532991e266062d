#include "kmod/regular_ops.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace kmod {

// ---------------------------------------------------------------- Symbol --

namespace {

double eval_poly(const std::vector<double>& c, double n) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * n + *it;
  return acc;
}

std::vector<double> parse_poly(const std::string& text) {
  std::vector<double> coeffs;
  const auto bump = [&coeffs](size_t deg, double c) {
    if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0.0);
    coeffs[deg] += c;
  };
  size_t i = 0;
  const size_t n = text.size();
  const auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == n) throw std::invalid_argument("empty weight symbol");
  bool any = false;
  while (i < n) {
    skip_ws();
    double sign = 1.0;
    while (i < n && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -sign;
      ++i;
      skip_ws();
    }
    if (i >= n) throw std::invalid_argument("dangling sign in weight symbol");
    // optional coefficient
    double coeff = 1.0;
    bool saw_number = false;
    {
      size_t start = i;
      while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
      if (i < n && (text[i] == 'e' || text[i] == 'E') && i > start) {
        size_t j = i + 1;
        if (j < n && (text[j] == '+' || text[j] == '-')) ++j;
        size_t digits = j;
        while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j > digits) i = j;
      }
      if (i > start) {
        coeff = std::stod(text.substr(start, i - start));
        saw_number = true;
      }
    }
    skip_ws();
    if (i < n && text[i] == '*') {
      ++i;
      skip_ws();
    }
    size_t deg = 0;
    if (i < n && text[i] == 'n') {
      ++i;
      deg = 1;
      if (i < n && text[i] == '^') {
        ++i;
        size_t start = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw std::invalid_argument("missing exponent in weight symbol");
        deg = static_cast<size_t>(std::stoul(text.substr(start, i - start)));
      }
    } else if (!saw_number) {
      std::ostringstream os;
      os << "unexpected character '" << text[i] << "' in weight symbol";
      throw std::invalid_argument(os.str());
    }
    bump(deg, sign * coeff);
    any = true;
    skip_ws();
  }
  if (!any) throw std::invalid_argument("empty weight symbol");
  while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
  return coeffs;
}

std::string poly_to_string(const std::vector<double>& c) {
  std::ostringstream os;
  bool first = true;
  for (size_t deg = c.size(); deg-- > 0;) {
    if (c[deg] == 0.0 && !(deg == 0 && first)) continue;
    if (!first) os << (c[deg] < 0 ? " - " : " + ");
    else if (c[deg] < 0) os << "-";
    const double mag = std::abs(c[deg]);
    if (deg == 0 || mag != 1.0) os << mag;
    if (deg >= 1) {
      if (mag != 1.0) os << "*";
      os << "n";
      if (deg > 1) os << "^" << deg;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::string strip(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

Symbol Symbol::parse(const std::string& text) {
  const std::string t = strip(text);
  if (t == "sqrt(n)") return sqrt_n();
  if (t.rfind("1/", 0) == 0) {
    std::string inner = strip(t.substr(2));
    if (!inner.empty() && inner.front() == '(' && inner.back() == ')') {
      inner = inner.substr(1, inner.size() - 2);
    }
    return reciprocal(parse_poly(inner));
  }
  return polynomial(parse_poly(t));
}

Symbol Symbol::constant(double c) { return Symbol(Kind::Polynomial, {c}); }

Symbol Symbol::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return Symbol(Kind::Polynomial, std::move(coeffs));
}

Symbol Symbol::sqrt_n() { return Symbol(Kind::SqrtN, {}); }

Symbol Symbol::reciprocal(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("reciprocal of empty polynomial");
  return Symbol(Kind::ReciprocalPolynomial, std::move(coeffs));
}

double Symbol::operator()(Index n) const {
  const double x = static_cast<double>(n);
  switch (kind_) {
    case Kind::Polynomial:
      return eval_poly(coeffs_, x);
    case Kind::SqrtN:
      return std::sqrt(x);
    case Kind::ReciprocalPolynomial: {
      const double p = eval_poly(coeffs_, x);
      if (p == 0.0) {
        std::ostringstream os;
        os << "weight symbol 1/(" << poly_to_string(coeffs_) << ") undefined at n=" << n;
        throw DomainError(os.str());
      }
      return 1.0 / p;
    }
  }
  return 0.0;
}

bool Symbol::unbounded() const {
  switch (kind_) {
    case Kind::Polynomial: {
      for (size_t d = 1; d < coeffs_.size(); ++d) {
        if (coeffs_[d] != 0.0) return true;
      }
      return false;
    }
    case Kind::SqrtN:
      return true;
    case Kind::ReciprocalPolynomial:
      return false;
  }
  return false;
}

std::string Symbol::to_string() const {
  switch (kind_) {
    case Kind::Polynomial:
      return poly_to_string(coeffs_);
    case Kind::SqrtN:
      return "sqrt(n)";
    case Kind::ReciprocalPolynomial:
      return "1/(" + poly_to_string(coeffs_) + ")";
  }
  return "";
}

// ------------------------------------------------------------- Generator --

Generator Generator::weighted_shift(int step, Symbol w) {
  if (step == 0) throw std::invalid_argument("weighted_shift: step must be nonzero");
  Generator g;
  g.kind_ = Kind::WeightedShift;
  g.step_ = step;
  g.symbol_ = std::move(w);
  return g;
}

Generator Generator::weighted_shift(int step, std::vector<double> weights) {
  if (step == 0) throw std::invalid_argument("weighted_shift: step must be nonzero");
  Generator g;
  g.kind_ = Kind::WeightedShift;
  g.step_ = step;
  g.weights_ = std::move(weights);
  return g;
}

Generator Generator::diagonal(Symbol g0) {
  Generator g;
  g.kind_ = Kind::Diagonal;
  g.symbol_ = std::move(g0);
  return g;
}

Generator Generator::diagonal(std::vector<double> values) {
  Generator g;
  g.kind_ = Kind::Diagonal;
  g.weights_ = std::move(values);
  return g;
}

Generator Generator::finite_rank(ComplexMatrix block) {
  ensure_finite(block, "finite_rank");
  if (block.rows() < 1 || block.cols() < 1) {
    throw std::invalid_argument("finite_rank: block must be nonempty");
  }
  Generator g;
  g.kind_ = Kind::FiniteRank;
  g.block_ = std::move(block);
  return g;
}

Generator Generator::sum(std::vector<Generator> terms) {
  if (terms.empty()) throw std::invalid_argument("sum: needs at least one term");
  if (terms.size() == 1) return terms.front();
  Generator g;
  g.kind_ = Kind::Sum;
  g.terms_ = std::move(terms);
  return g;
}

Generator Generator::product(std::vector<Generator> terms) {
  if (terms.empty()) throw std::invalid_argument("product: needs at least one term");
  if (terms.size() == 1) return terms.front();
  Generator g;
  g.kind_ = Kind::Product;
  g.terms_ = std::move(terms);
  return g;
}

double Generator::weight_at(Index n) const {
  if (symbol_) return (*symbol_)(n);
  const auto& list = *weights_;
  if (n < 0 || static_cast<size_t>(n) >= list.size()) {
    std::ostringstream os;
    os << "explicit weight list of length " << list.size()
       << " has no entry for n=" << n;
    throw std::out_of_range(os.str());
  }
  return list[static_cast<size_t>(n)];
}

Generator Generator::adjoint() const {
  switch (kind_) {
    case Kind::WeightedShift: {
      // Real weights indexed by the larger coordinate: conjugation is a
      // no-op and the step flips sign.
      Generator g = *this;
      g.step_ = -step_;
      return g;
    }
    case Kind::Diagonal:
      return *this;  // real diagonal symbols are self-adjoint
    case Kind::FiniteRank:
      return finite_rank(block_.adjoint());
    case Kind::Sum: {
      std::vector<Generator> adj;
      adj.reserve(terms_.size());
      for (const auto& t : terms_) adj.push_back(t.adjoint());
      return sum(std::move(adj));
    }
    case Kind::Product: {
      std::vector<Generator> adj;
      adj.reserve(terms_.size());
      for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        adj.push_back(it->adjoint());
      }
      return product(std::move(adj));
    }
  }
  return *this;
}

Index Generator::band_upper() const {
  switch (kind_) {
    case Kind::WeightedShift:
      return std::max(step_, 0);
    case Kind::Diagonal:
    case Kind::FiniteRank:
      return 0;
    case Kind::Sum: {
      Index b = 0;
      for (const auto& t : terms_) b = std::max(b, t.band_upper());
      return b;
    }
    case Kind::Product: {
      Index b = 0;
      for (const auto& t : terms_) b += t.band_upper();
      return b;
    }
  }
  return 0;
}

Index Generator::band_lower() const {
  switch (kind_) {
    case Kind::WeightedShift:
      return std::max(-step_, 0);
    case Kind::Diagonal:
    case Kind::FiniteRank:
      return 0;
    case Kind::Sum: {
      Index b = 0;
      for (const auto& t : terms_) b = std::max(b, t.band_lower());
      return b;
    }
    case Kind::Product: {
      Index b = 0;
      for (const auto& t : terms_) b += t.band_lower();
      return b;
    }
  }
  return 0;
}

Index Generator::row_extent(Index cols) const {
  if (cols <= 0) return 0;
  switch (kind_) {
    case Kind::WeightedShift:
      return std::max<Index>(cols + step_, 0);
    case Kind::Diagonal:
      return cols;
    case Kind::FiniteRank:
      return block_.rows();
    case Kind::Sum: {
      Index r = 0;
      for (const auto& t : terms_) r = std::max(r, t.row_extent(cols));
      return r;
    }
    case Kind::Product: {
      Index r = cols;
      for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        r = it->row_extent(r);
      }
      return r;
    }
  }
  return cols;
}

ComplexMatrix Generator::block(Index rows, Index cols) const {
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  switch (kind_) {
    case Kind::WeightedShift: {
      for (Index j = 0; j < cols; ++j) {
        const Index i = j + step_;
        if (i < 0 || i >= rows) continue;
        out(i, j) = weight_at(std::max(i, j));
      }
      break;
    }
    case Kind::Diagonal: {
      const Index n = std::min(rows, cols);
      for (Index i = 0; i < n; ++i) out(i, i) = weight_at(i);
      break;
    }
    case Kind::FiniteRank: {
      const Index r = std::min(rows, block_.rows());
      const Index c = std::min(cols, block_.cols());
      out.topLeftCorner(r, c) = block_.topLeftCorner(r, c);
      break;
    }
    case Kind::Sum: {
      for (const auto& t : terms_) out += t.block(rows, cols);
      break;
    }
    case Kind::Product: {
      // Working left to right, pad the interface dimension so that every
      // product is the exact block of the infinite product.
      std::vector<Index> widths(terms_.size() + 1);
      widths.back() = cols;
      for (size_t k = terms_.size(); k-- > 1;) {
        widths[k] = terms_[k].row_extent(widths[k + 1]);
      }
      widths[0] = rows;
      ComplexMatrix acc = terms_[0].block(rows, widths[1]);
      for (size_t k = 1; k < terms_.size(); ++k) {
        acc = acc * terms_[k].block(widths[k], widths[k + 1]);
      }
      out = std::move(acc);
      break;
    }
  }
  return out;
}

bool Generator::unbounded() const {
  switch (kind_) {
    case Kind::WeightedShift:
    case Kind::Diagonal:
      return symbol_ ? symbol_->unbounded() : false;
    case Kind::FiniteRank:
      return false;
    case Kind::Sum:
    case Kind::Product: {
      for (const auto& t : terms_) {
        if (t.unbounded()) return true;
      }
      return false;
    }
  }
  return false;
}

// ---------------------------------------------------------- OperatorTower --

OperatorTower::OperatorTower(Generator g, std::vector<Index> lv, Index d)
    : generator(std::move(g)), levels(std::move(lv)), dim_h(d) {
  if (levels.empty()) levels = {16, 32};
  for (size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) {
      throw std::invalid_argument("tower levels must be strictly increasing");
    }
  }
  if (levels.front() < 2) {
    throw std::invalid_argument("tower levels must be at least 2");
  }
  unbounded_flag = generator.unbounded();
}

AdjointableOp OperatorTower::instantiate(Index level) const {
  return AdjointableOp::from_psi(dim_h, generator.square(level));
}

OperatorTower adjoint_tower(const OperatorTower& t) {
  OperatorTower a(t.generator.adjoint(), t.levels, t.dim_h);
  return a;
}

RegularityReport check_regularity(const OperatorTower& t, double tol) {
  RegularityReport report;
  report.tol = tol;
  report.regular_surrogate = true;
  for (Index n : t.levels) {
    const ComplexMatrix a = t.generator.square(n);
    const ComplexMatrix h =
        ComplexMatrix::Identity(n, n) + a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
    const double min_eig = es.eigenvalues().minCoeff();
    report.levels.push_back(RegularityLevel{n, min_eig});
    if (min_eig < 1.0 - tol) report.regular_surrogate = false;
  }
  return report;
}

// ------------------------------------------------------ bounded transform --

ComplexMatrix bounded_transform_matrix(const ComplexMatrix& a) {
  const Index n = a.rows();
  const ComplexMatrix gram = ComplexMatrix::Identity(n, n) + a.adjoint() * a;
  const ComplexMatrix q = hermitian_function(
      gram, [](double x) { return 1.0 / std::sqrt(x); },
      [](double x) { return x > 0.0; });
  return a * q;
}

BoundedTransformResult bounded_transform(const OperatorTower& t) {
  BoundedTransformResult result;
  for (Index n : t.levels) {
    const ComplexMatrix a = t.generator.square(n);
    const ComplexMatrix gram = ComplexMatrix::Identity(n, n) + a.adjoint() * a;
    const ComplexMatrix q = hermitian_function(
        gram, [](double x) { return 1.0 / std::sqrt(x); },
        [](double x) { return x > 0.0; });
    BoundedTransformLevel lvl;
    lvl.level = n;
    lvl.f = a * q;
    lvl.q = q;
    lvl.f_norm = operator_norm(lvl.f);
    const ComplexMatrix defect =
        ComplexMatrix::Identity(n, n) - lvl.f.adjoint() * lvl.f;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (defect + defect.adjoint()));
    lvl.defect_min_eig = es.eigenvalues().minCoeff();
    lvl.q_square_residual = (q * q - defect).norm() / (1.0 + defect.norm());
    result.norm_f = std::max(result.norm_f, lvl.f_norm);
    result.levels.push_back(std::move(lvl));
  }
  return result;
}

AdjointableOp BoundedTransformResult::f_op(size_t i, Index d) const {
  return AdjointableOp::from_psi(d, levels.at(i).f);
}

AdjointableOp BoundedTransformResult::q_op(size_t i, Index d) const {
  return AdjointableOp::from_psi(d, levels.at(i).q);
}

ComplexMatrix inverse_transform_matrix(const ComplexMatrix& f, double tol) {
  const Index n = f.rows();
  const ComplexMatrix defect = ComplexMatrix::Identity(n, n) - f.adjoint() * f;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (defect + defect.adjoint()));
  const double min_eig = es.eigenvalues().size() > 0 ? es.eigenvalues().minCoeff() : 0.0;
  if (min_eig <= tol) {
    std::ostringstream os;
    os << "inverse transform: defect 1 - F*F has smallest eigenvalue " << min_eig
       << " <= " << tol << "; no bounded operator at this level has transform F";
    throw DefectSingular(os.str());
  }
  const ComplexMatrix inv_sqrt = hermitian_function(
      defect, [](double x) { return 1.0 / std::sqrt(x); },
      [tol](double x) { return x > tol; });
  return f * inv_sqrt;
}

AdjointableOp inverse_transform(const AdjointableOp& f, double tol) {
  return AdjointableOp::from_psi(f.d, inverse_transform_matrix(f.psi_matrix(), tol));
}

// ---------------------------------------------------------- lemma 4.2 --

namespace {

SubspacePairCheck pair_check(const ComplexMatrix& a, const ComplexMatrix& b) {
  SubspacePairCheck c;
  c.dim_a = a.cols();
  c.dim_b = b.cols();
  c.residual = subspace_mutual_residual(a, b);
  return c;
}

ComplexMatrix perp_basis(const ComplexMatrix& basis, Index ambient) {
  if (basis.cols() == 0) return ComplexMatrix::Identity(ambient, ambient);
  return kernel_basis(basis.adjoint());
}

Index half_tall_nullity(const ComplexMatrix& m_sq, double tol) {
  const Index half = m_sq.cols() / 2;
  const ComplexMatrix block = m_sq.leftCols(half);
  return half - numerical_rank(block, tol).rank;
}

bool all_equal(const std::vector<Index>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] != v[0]) return false;
  }
  return true;
}

}  // namespace

Lemma42Report verify_lemma_4_2(const OperatorTower& t, double tol_rank) {
  Lemma42Report report;
  const Generator adj = t.generator.adjoint();
  std::vector<Index> kt, kts, kf, kfs;
  for (Index n : t.levels) {
    const ComplexMatrix a = t.generator.square(n);
    const ComplexMatrix f = bounded_transform_matrix(a);

    // The per-level identities are exact matrix facts relating a compression
    // to its own transform, so they are checked on the square blocks.
    const ComplexMatrix ran_a = range_basis(a, tol_rank);
    const ComplexMatrix ran_ah = range_basis(a.adjoint(), tol_rank);
    const ComplexMatrix ran_f = range_basis(f, tol_rank);
    const ComplexMatrix ran_fh = range_basis(f.adjoint(), tol_rank);
    const ComplexMatrix ker_a = kernel_basis(a, tol_rank);
    const ComplexMatrix ker_ah = kernel_basis(a.adjoint(), tol_rank);
    const ComplexMatrix ker_f = kernel_basis(f, tol_rank);
    const ComplexMatrix ker_fh = kernel_basis(f.adjoint(), tol_rank);

    Lemma42Level lvl;
    lvl.level = n;
    lvl.ran_t_vs_ran_f = pair_check(ran_a, ran_f);
    lvl.ran_tstar_vs_ran_fstar = pair_check(ran_ah, ran_fh);
    lvl.ker_tstar_vs_ran_t_perp = pair_check(ker_ah, perp_basis(ran_a, n));
    lvl.ker_t_vs_ran_tstar_perp = pair_check(ker_a, perp_basis(ran_ah, n));
    lvl.ker_t_vs_ker_f = pair_check(ker_a, ker_f);
    lvl.ker_tstar_vs_ker_fstar = pair_check(ker_ah, ker_fh);

    // Stable dimensions: compactly supported kernels, free of truncation
    // boundary artifacts. The direct operator exposes them through its tall
    // blocks, the transform through half-width column restrictions.
    lvl.stable_ker_t = t.generator.tall(n).cols() -
                       numerical_rank(t.generator.tall(n), tol_rank).rank;
    lvl.stable_ker_tstar =
        adj.tall(n).cols() - numerical_rank(adj.tall(n), tol_rank).rank;
    lvl.stable_ker_f = half_tall_nullity(f, tol_rank);
    lvl.stable_ker_fstar = half_tall_nullity(f.adjoint(), tol_rank);

    kt.push_back(lvl.stable_ker_t);
    kts.push_back(lvl.stable_ker_tstar);
    kf.push_back(lvl.stable_ker_f);
    kfs.push_back(lvl.stable_ker_fstar);

    for (const auto* c :
         {&lvl.ran_t_vs_ran_f, &lvl.ran_tstar_vs_ran_fstar, &lvl.ker_tstar_vs_ran_t_perp,
          &lvl.ker_t_vs_ran_tstar_perp, &lvl.ker_t_vs_ker_f, &lvl.ker_tstar_vs_ker_fstar}) {
      report.max_residual = std::max(report.max_residual, c->residual);
    }
    report.levels.push_back(std::move(lvl));
  }
  report.dims_stable = all_equal(kt) && all_equal(kts) && all_equal(kf) && all_equal(kfs);
  report.dims_match = !kt.empty() && kt[0] == kf[0] && kts[0] == kfs[0];
  return report;
}

// ------------------------------------------------------- pseudo-inverse --

PseudoInverseResult pseudo_inverse_regular(const OperatorTower& t, double tol_rank) {
  PseudoInverseResult result;
  const Generator adj = t.generator.adjoint();
  std::vector<Index> left_ranks, right_ranks;
  std::vector<double> norms;
  for (Index n : t.levels) {
    const ComplexMatrix a = t.generator.tall(n);
    const ComplexMatrix astar = adj.tall(n);
    PseudoInverseLevel lvl;
    lvl.level = n;
    lvl.g = pseudo_inverse(a, tol_rank);
    const ComplexMatrix gstar = pseudo_inverse(astar, tol_rank);

    const ComplexMatrix left = lvl.g * a - ComplexMatrix::Identity(n, n);
    const ComplexMatrix right = gstar * astar - ComplexMatrix::Identity(n, n);
    // Defects of a Moore-Penrose inverse are orthogonal projections, so the
    // rank cut at 1/2 is unambiguous.
    const RankDecision l = numerical_rank(left, 0.5);
    const RankDecision r = numerical_rank(right, 0.5);
    lvl.left_rank = l.rank;
    lvl.right_rank = r.rank;
    lvl.left_excess = l.rank < l.sigma.size() ? l.sigma(l.rank) : 0.0;
    lvl.right_excess = r.rank < r.sigma.size() ? r.sigma(r.rank) : 0.0;
    lvl.g_norm = operator_norm(lvl.g);

    left_ranks.push_back(lvl.left_rank);
    right_ranks.push_back(lvl.right_rank);
    norms.push_back(std::max(lvl.g_norm, operator_norm(gstar)));
    result.levels.push_back(std::move(lvl));
  }
  result.ranks_stable = all_equal(left_ranks) && all_equal(right_ranks);
  double lo = norms.front(), hi = norms.front();
  for (double x : norms) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  result.norm_stable = (lo == 0.0 && hi == 0.0) || (lo > 0.0 && hi / lo <= 1.5);
  if (!result.ranks_stable || !result.norm_stable) {
    std::ostringstream os;
    os << "pseudo-inverse defects fail to stabilize across levels (ranks "
       << (result.ranks_stable ? "stable" : "unstable") << ", norms "
       << (result.norm_stable ? "stable" : "unstable") << ")";
    throw NoPseudoInverse(os.str());
  }
  return result;
}

}  // namespace kmod
