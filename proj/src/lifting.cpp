#include "harmony/lifting.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "harmony/errors.hpp"

namespace harmony {

namespace {

// Marks every product s * x; false on a zero product or a repeat.
bool tiles_units(const FiniteField& f, const std::vector<FieldElement>& s, const std::vector<FieldElement>& xs) {
  if (s.size() * xs.size() != f.order() - 1) return false;
  std::vector<bool> seen(f.order(), false);
  for (auto a : s) {
    for (auto x : xs) {
      const auto p = f.mul(a, x);
      if (p == f.zero() || seen[p.value]) return false;
      seen[p.value] = true;
    }
  }
  return true;
}

std::uint64_t require_harmonious(const BlockFamily& sdf) {
  const auto v = classify(sdf);
  if (v.kind != FamilyKind::strong) throw PreconditionError("base family is not a strong difference family");
  if (!v.harmonious) throw PreconditionError("base SDF is not harmonious");
  if (v.lambda % 2) throw PreconditionError("SDF index " + std::to_string(v.lambda) + " is odd");
  return v.lambda;
}

}  // namespace

LiftingCertificate verify_lifting(const Lifting& l) {
  LiftingCertificate cert;
  const auto& f = l.field;
  const auto& g = l.base.group;
  auto fail = [&](std::string why) {
    cert.defect = std::move(why);
    return cert;
  };
  const auto base = l.base.blocks();
  if (base.size() != l.blocks.size()) return fail("lifted block count differs from the base family");
  for (std::size_t h = 0; h < base.size(); ++h) {
    Multiset projected;
    for (const auto& pt : l.blocks[h]) {
      if (pt.g >= g.order() || pt.c.value >= f.order()) return fail("lifted point outside G x F_q");
      ++projected[pt.g];
    }
    if (projected != base[h].counts()) return fail("block " + std::to_string(h) + " does not project onto its base block");
  }
  const auto verdict = classify(l.base);
  if (verdict.kind != FamilyKind::strong) return fail("base family is not a strong difference family");
  cert.lambda = verdict.lambda;
  if ((f.order() - 1) % cert.lambda) return fail("q - 1 is not a multiple of the SDF index");
  if (l.companion.size() != (f.order() - 1) / cert.lambda) return fail("companion size is not (q-1)/lambda");
  for (auto s : l.companion) {
    if (s == f.zero()) return fail("companion contains 0");
  }
  for (const auto& b : l.blocks) {
    for (const auto& pt : b) {
      if (pt.c == f.zero()) return fail("projection contains 0");
      cert.projection.push_back(pt.c);
    }
  }
  cert.well_formed = true;

  cert.deltas.assign(g.order(), {});
  for (const auto& b : l.blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (i != j) cert.deltas[g.sub(b[i].g, b[j].g)].push_back(f.sub(b[i].c, b[j].c));
      }
    }
  }
  cert.good = true;
  for (Index x = 0; x < g.order() && cert.good; ++x) {
    if (!tiles_units(f, l.companion, cert.deltas[x])) {
      cert.good = false;
      cert.defect = "S * Delta_g misses or repeats a unit at g = " + std::to_string(x);
    }
  }
  cert.perfect = cert.good && tiles_units(f, l.companion, cert.projection);
  if (cert.good && !cert.perfect) cert.defect = "S * pi(L) misses or repeats a unit";
  return cert;
}

// ---------------------------------------------------------------------------

bool QBound::exceeded_by(const Int& q) const {
  // 4Q = A + sqrt(W) with A = u^2 + d, W = 4 u^2 d
  const Int a = u * u + d;
  const Int w = 4 * u * u * d;
  const Int lhs = 4 * q - a;
  return lhs > 0 && lhs * lhs > w;
}

QBound::Real QBound::value() const {
  const Real root = boost::multiprecision::sqrt(Real(d));
  const Real s = Real(u) + root;
  return s * s / 4;
}

QBound q_bound(std::uint64_t e, std::uint64_t n) {
  if (e < 2 || n < 1) throw PreconditionError("Q(e, n) needs e >= 2 and n >= 1");
  QBound b;
  b.e = e;
  b.n = n;
  QBound::Int binom = 1, power = 1;
  for (std::uint64_t h = 1; h <= n; ++h) {
    binom = binom * (n - h + 1) / h;
    power *= e - 1;
    b.u += binom * power * (h - 1);
  }
  QBound::Int en = 1;
  for (std::uint64_t i = 1; i < n; ++i) en *= e;
  b.d = b.u * b.u + 4 * n * en;
  const QBound::Int a = b.u * b.u + b.d;
  const QBound::Int w = 4 * b.u * b.u * b.d;
  const QBound::Int s = boost::multiprecision::sqrt(w);
  if (s * s == w) {
    b.threshold = (a + s + 3) / 4;
  } else {
    b.threshold = (a + s) / 4 + 1;
  }
  return b;
}

// ---------------------------------------------------------------------------

LiftingPlan make_lifting_plan(const BlockFamily& sdf) {
  LiftingPlan plan;
  plan.lambda = require_harmonious(sdf);
  const auto& g = sdf.group;
  const auto half = plan.lambda / 2;
  for (std::uint64_t z = 0; z < half; ++z) plan.half.push_back(z);
  plan.split = group_split(g);
  plan.triples.assign(g.order(), {});

  std::uint64_t next = 0;
  for (const auto& b : sdf.blocks()) {
    const auto h = plan.elements.size();
    plan.elements.push_back(b.elements());
    const auto& e = plan.elements.back();
    plan.phi.emplace_back();
    for (std::size_t i = 0; i < e.size(); ++i) plan.phi[h].push_back(next++);
    plan.psi.emplace_back(e.size(), std::vector<std::int64_t>(e.size(), -1));
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (std::size_t j = 0; j < e.size(); ++j) {
        if (i != j) plan.triples[g.sub(e[i], e[j])].push_back({h, i, j});
      }
    }
  }

  const auto lam = static_cast<std::int64_t>(plan.lambda);
  const auto hl = static_cast<std::int64_t>(half);
  for (std::size_t k = 0; k < plan.split.plus.size(); ++k) {
    std::int64_t z = 0;
    for (const auto& t : plan.triples[plan.split.plus[k]]) plan.psi[t.h][t.i][t.j] = z++;
    for (const auto& t : plan.triples[plan.split.minus[k]]) plan.psi[t.h][t.i][t.j] = (plan.psi[t.h][t.j][t.i] + hl) % lam;
  }
  for (auto x : plan.split.involutions) {
    std::int64_t z = 0;
    for (const auto& t : plan.triples[x]) {
      if (t.i < t.j) {
        plan.psi[t.h][t.i][t.j] = z;
        plan.psi[t.h][t.j][t.i] = z + hl;
        ++z;
      }
    }
    if (z != hl) throw VerificationError("involution class does not split into conjugate halves");
  }
  return plan;
}

GenericLiftingResult generic_perfect_lifting(const BlockFamily& sdf, const FiniteField& f,
                                             const GenericLiftingOptions& options) {
  const auto lambda = require_harmonious(sdf);
  const auto q = f.order();
  if (q % (2 * lambda) != (lambda + 1) % (2 * lambda)) {
    throw PreconditionError("q = " + std::to_string(q) + " must be " + std::to_string(lambda + 1) + " mod " +
                            std::to_string(2 * lambda));
  }
  const auto plan = make_lifting_plan(sdf);

  std::vector<std::uint32_t> cls(q, 0);
  for (std::uint64_t k = 0; k + 1 < q; ++k) cls[f.exp(k).value] = static_cast<std::uint32_t>(k % lambda);

  GenericLiftingResult result;
  Lifting l{sdf, f, {}, cyclotomic_class(f, lambda, 0)};
  std::mt19937_64 rng(options.seed);

  for (std::size_t h = 0; h < plan.elements.size(); ++h) {
    const auto k = plan.elements[h].size();
    std::vector<std::vector<FieldElement>> candidates(k);
    for (std::size_t i = 0; i < k; ++i) {
      candidates[i] = cyclotomic_class(f, lambda, plan.phi[h][i]);
      if (options.strategy == Strategy::random) std::shuffle(candidates[i].begin(), candidates[i].end(), rng);
    }
    std::vector<FieldElement> c(k);
    bool stop = false;
    std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
      if (i == k) return true;
      for (auto x : candidates[i]) {
        if (options.max_nodes && result.nodes >= options.max_nodes) {
          result.node_limit_hit = stop = true;
          return false;
        }
        ++result.nodes;
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j) {
          const auto d = f.sub(x, c[j]);
          ok = d != f.zero() && cls[d.value] == static_cast<std::uint32_t>(plan.psi[h][i][j]);
        }
        if (!ok) continue;
        c[i] = x;
        if (place(i + 1)) return true;
        if (options.greedy || stop) return false;
      }
      return false;
    };
    if (!place(0)) {
      result.failed_block = h;
      return result;
    }
    std::vector<LiftedPoint> block;
    for (std::size_t i = 0; i < k; ++i) block.push_back({plan.elements[h][i], c[i]});
    l.blocks.push_back(std::move(block));
  }
  result.lifting = std::move(l);
  return result;
}

// ---------------------------------------------------------------------------

AbelianGroup lifted_group(const Lifting& l) { return l.base.group.product(additive_group(l.field)); }

BlockFamily expand(const Lifting& l) {
  const auto cert = verify_lifting(l);
  if (!cert.good) throw PreconditionError("cannot expand a lifting that is not good: " + cert.defect);
  BlockFamily out{lifted_group(l), {}};
  const auto q = l.field.order();
  for (auto s : l.companion) {
    for (const auto& b : l.blocks) {
      std::vector<Index> xs;
      for (const auto& pt : b) xs.push_back(pt.g * q + l.field.mul(s, pt.c).value);
      out.entries.push_back({Block::of(xs), 1});
    }
  }
  return out;
}

Lifting extend_field(const Lifting& l, std::uint32_t k, const std::optional<std::vector<std::uint32_t>>& big_modulus) {
  if (k == 0) throw PreconditionError("extension degree must be positive");
  if (k == 1) return l;
  const FiniteField big(l.field.characteristic(), l.field.degree() * k, big_modulus);
  const auto image = subfield_embedding(l.field, big);
  const auto n = (big.order() - 1) / (l.field.order() - 1);

  Lifting out{l.base, big, {}, {}};
  for (auto& e : out.base.entries) e.repeat *= n;
  for (const auto& b : l.blocks) {
    for (std::uint64_t j = 0; j < n; ++j) {
      const auto t = big.exp(j);
      std::vector<LiftedPoint> lifted;
      for (const auto& pt : b) lifted.push_back({pt.g, big.mul(t, image[pt.c.value])});
      out.blocks.push_back(std::move(lifted));
    }
  }
  for (auto s : l.companion) out.companion.push_back(image[s.value]);
  return out;
}

// ---------------------------------------------------------------------------

bool DifferenceMatrix::is_difference_matrix() const {
  const auto v = group.order();
  for (const auto& row : rows) {
    if (row.size() != v) return false;
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t s = r + 1; s < rows.size(); ++s) {
      std::vector<bool> seen(v, false);
      for (std::size_t c = 0; c < v; ++c) {
        const auto d = group.sub(rows[r][c], rows[s][c]);
        if (seen[d]) return false;
        seen[d] = true;
      }
    }
  }
  return true;
}

bool DifferenceMatrix::is_homogeneous() const {
  if (!is_difference_matrix()) return false;
  for (const auto& row : rows) {
    std::vector<bool> seen(group.order(), false);
    for (auto x : row) {
      if (seen[x]) return false;
      seen[x] = true;
    }
  }
  return true;
}

DifferenceMatrix field_dm(const FiniteField& f, std::uint64_t k) {
  if (k == 0 || k > f.order() - 1) throw PreconditionError("a field DM has between 1 and q-1 rows");
  DifferenceMatrix m{additive_group(f), {}};
  for (std::uint64_t t = 0; t < k; ++t) {
    const auto r = f.exp(t);
    std::vector<Index> row;
    for (std::uint64_t x = 0; x < f.order(); ++x) row.push_back(f.mul(r, f.element(x)).value);
    m.rows.push_back(std::move(row));
  }
  return m;
}

namespace {

// |X| for a family over G x X, checking that G is the leading factor block.
std::uint64_t tail_order(const AbelianGroup& g, const AbelianGroup& full, const char* which) {
  const auto& a = g.factors();
  const auto& b = full.factors();
  if (b.size() < a.size() || !std::equal(a.begin(), a.end(), b.begin())) {
    throw PreconditionError(std::string(which) + " is not a family over " + g.describe() + " x (something)");
  }
  return full.order() / g.order();
}

void require_resolvable(const BlockFamily& f, std::uint64_t tail, const char* which) {
  if (f.entries.empty()) throw PreconditionError(std::string(which) + " is empty");
  const auto v = classify(f, Subgroup::head(f.group, tail));
  if (v.kind != FamilyKind::relative || v.lambda != 1 || !v.resolvable) {
    throw PreconditionError(std::string(which) + " is not a resolvable relative DF with index 1");
  }
}

}  // namespace

BlockFamily compose(const AbelianGroup& g, const BlockFamily& fx, const BlockFamily& fy, const DifferenceMatrix& m) {
  const auto nx = tail_order(g, fx.group, "F_X");
  const auto ny = tail_order(g, fy.group, "F_Y");
  require_resolvable(fx, nx, "F_X");
  require_resolvable(fy, ny, "F_Y");
  const std::vector<std::uint64_t> y_factors(fy.group.factors().begin() + static_cast<std::ptrdiff_t>(g.rank()),
                                             fy.group.factors().end());
  if (!(m.group == AbelianGroup(y_factors))) throw PreconditionError("difference matrix is not over Y");
  std::uint64_t kmax = 0;
  for (const auto& e : fx.entries) kmax = std::max(kmax, e.block.size());
  if (m.rows.size() < kmax) throw PreconditionError("difference matrix has fewer rows than the largest F_X block");
  if (!m.is_homogeneous()) throw PreconditionError("difference matrix is not homogeneous");

  BlockFamily out{fx.group.product(m.group), {}};
  for (const auto& b : fx.blocks()) {
    const auto xs = b.elements();
    for (std::uint64_t c = 0; c < ny; ++c) {
      std::vector<Index> ys;
      for (std::size_t r = 0; r < xs.size(); ++r) ys.push_back(xs[r] * ny + m.rows[r][c]);
      out.entries.push_back({Block::of(ys), 1});
    }
  }
  for (const auto& b : fy.blocks()) {
    std::vector<Index> ys;
    for (auto e : b.elements()) ys.push_back((e / ny) * nx * ny + e % ny);
    out.entries.push_back({Block::of(ys), 1});
  }
  return out;
}

}  // namespace harmony
