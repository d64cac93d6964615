#include "harmony/search.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <random>
#include <set>
#include <thread>

#include "harmony/constructors.hpp"
#include "harmony/errors.hpp"

namespace harmony {

namespace {

struct FormBuilder {
  const FiniteField& f;

  LinearForm operator()(std::initializer_list<std::pair<std::size_t, std::int64_t>> terms, std::int64_t constant = 0) const {
    LinearForm form;
    for (auto [v, c] : terms) form.terms.push_back({v, f.from_integer(c)});
    form.constant = f.from_integer(constant);
    return form;
  }
};

void require(bool ok, const std::string& shape, std::uint64_t q, const std::string& condition) {
  if (!ok) throw PreconditionError("shape " + shape + " needs " + condition + " (q = " + std::to_string(q) + ")");
}

}  // namespace

std::vector<std::string> shape_names() { return {"quad", "quad17", "quint", "sept"}; }

TupleShape make_shape(const std::string& name, const FiniteField& f) {
  const auto q = f.order();
  const FormBuilder form{f};
  TupleShape s{name, f, 0, {}, {}, {}, false, std::nullopt};
  if (name == "quad" || name == "quad17") {
    require(q % 8 == 1, name, q, "q = 1 mod 8");
    if (name == "quad") require(q > 9, name, q, "q > 9");
    enum { a, b, c, d };
    s.e = 4;
    s.homogeneous = true;
    s.variables = {"a", "b", "c", "d"};
    s.list_names = {"D0", "D1", "pi"};
    if (name == "quad") {
      s.lists.push_back({form({{a, 1}, {b, -1}}), form({{c, 1}, {d, -1}}), form({{a, 1}, {c, -1}}), form({{b, 1}, {d, -1}})});
      s.lists.push_back({form({{a, 1}, {b, -1}}), form({{a, 1}, {d, -1}}), form({{b, 1}, {c, -1}}), form({{c, 1}, {d, -1}})});
    } else {
      s.lists.push_back({form({{a, 2}}), form({{b, 1}, {c, -1}}), form({{b, 1}, {d, 1}}), form({{c, 1}, {d, -1}})});
      s.lists.push_back({form({{d, 2}}), form({{b, 1}, {c, -1}}), form({{b, 1}, {d, -1}}), form({{c, 1}, {d, 1}})});
    }
    s.lists.push_back({form({{a, 1}}), form({{b, 1}}), form({{c, 1}}), form({{d, 1}})});
    return s;
  }
  if (name == "quint") {
    require(q % 36 == 19, name, q, "q = 19 mod 36");
    enum { a, b, c, d, e };
    s.e = 6;
    s.variables = {"a", "b", "c", "d", "e"};
    s.list_names = {"D0", "D1", "pi"};
    const auto eps = f.exp((q - 1) / 3);
    s.epsilon = eps;
    const auto e1 = f.sub(eps, f.one());
    const auto me1 = f.neg(e1);
    const auto m1 = f.neg(f.one());
    auto lf = [](std::vector<std::pair<std::size_t, FieldElement>> t, FieldElement k) { return LinearForm{std::move(t), k}; };
    const auto zero = f.zero();
    s.lists.push_back({lf({{a, e1}}, zero), lf({{a, me1}}, zero), lf({{b, e1}}, zero), lf({{b, me1}}, zero),
                       form({{e, 1}}, -1), form({{e, -1}}, 1)});
    s.lists.push_back({lf({{c, e1}}, zero), lf({{d, e1}}, zero), lf({}, e1), lf({{e, e1}}, zero), lf({{e, m1}}, eps),
                       lf({{e, eps}}, m1)});
    s.lists.push_back({form({}, 1), form({{a, 1}}), form({{b, 1}}), form({{c, 1}}), form({{d, 1}}), form({{e, 1}})});
    return s;
  }
  if (name == "sept") {
    require(q % 14 == 1, name, q, "q = 1 mod 14");
    enum { a, b, c, d, e, ff, g };
    s.e = 7;
    s.homogeneous = true;
    s.variables = {"a", "b", "c", "d", "e", "f", "g"};
    s.list_names = {"D00", "D01", "D10", "D11", "pi"};
    auto m = [&](std::size_t x, std::size_t y) { return form({{x, 1}, {y, -1}}); };
    auto p = [&](std::size_t x, std::size_t y) { return form({{x, 1}, {y, 1}}); };
    s.lists.push_back({m(a, b), m(a, c), m(b, c), m(d, e), m(a, d), m(b, e), m(c, ff)});
    s.lists.push_back({m(d, g), m(e, g), p(ff, g), m(b, c), m(b, ff), m(c, e), m(e, ff)});
    s.lists.push_back({p(d, g), p(e, g), m(ff, g), m(a, c), m(a, ff), m(c, d), m(d, ff)});
    s.lists.push_back({m(d, ff), m(e, ff), form({{g, 2}}), m(a, b), m(a, e), m(b, d), m(d, e)});
    s.lists.push_back({form({{a, 1}}), form({{b, 1}}), form({{c, 1}}), form({{d, 1}}), form({{e, 1}}), form({{ff, 1}}),
                       form({{g, 1}})});
    return s;
  }
  throw PreconditionError("unknown shape '" + name + "'");
}

FieldElement evaluate(const TupleShape& s, const LinearForm& form, const std::vector<FieldElement>& tuple) {
  auto v = form.constant;
  for (const auto& [var, coef] : form.terms) v = s.field.add(v, s.field.mul(coef, tuple.at(var)));
  return v;
}

bool tuple_is_good(const TupleShape& s, const std::vector<FieldElement>& tuple) {
  if (tuple.size() != s.variables.size()) throw PreconditionError("tuple has the wrong length for shape " + s.name);
  for (const auto& list : s.lists) {
    std::vector<FieldElement> values;
    for (const auto& form : list) {
      const auto v = evaluate(s, form, tuple);
      if (v == s.field.zero()) return false;
      values.push_back(v);
    }
    if (!is_transversal(s.field, s.e, values)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

class Engine {
 public:
  Engine(const TupleShape& s, const SearchOptions& o) : s_(s), o_(o), q_(s.field.order()), n_(s.variables.size()) {
    const auto& f = s.field;
    lg_.assign(q_, 0);
    ex_.resize(q_ - 1);
    for (std::uint64_t k = 0; k + 1 < q_; ++k) {
      ex_[k] = f.exp(k).value;
      lg_[ex_[k]] = static_cast<std::uint32_t>(k);
    }
    prime_ = f.degree() == 1;
    by_last_.assign(n_, {});
    for (std::size_t l = 0; l < s.lists.size(); ++l) {
      for (const auto& form : s.lists[l]) {
        Compiled c{l, {}, form.constant.value};
        std::optional<std::size_t> last;
        for (const auto& [var, coef] : form.terms) {
          if (coef == f.zero()) continue;
          c.terms.push_back({var, lg_[coef.value]});
          last = std::max(last.value_or(0), var);
        }
        if (last) {
          by_last_[*last].push_back(std::move(c));
        } else {
          constants_.push_back(std::move(c));
        }
      }
    }
    lists_ = s.lists.size();

    domains_.assign(n_, {});
    std::mt19937_64 rng(o.seed);
    for (std::size_t v = 0; v < n_; ++v) {
      domains_[v] = ex_;
      if (o.strategy == Strategy::random) std::shuffle(domains_[v].begin(), domains_[v].end(), rng);
    }
    normalized_ = o.normalize && s.homogeneous && n_ > 0;
    if (normalized_) domains_[0] = {1};
  }

  SearchResult run() {
    SearchResult result;
    State root(n_, lists_);
    for (const auto& c : constants_) {
      if (!apply(c, root)) return result;
    }
    std::size_t first_free = 0;
    if (normalized_) {
      root.x[0] = 1;
      if (!apply_var(0, root)) return result;
      first_free = 1;
    }
    if (first_free >= n_) {
      result.witness = decode(root.x);
      result.count = 1;
      return result;
    }

    const auto shards = domains_[first_free].size();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
    std::atomic<std::uint64_t> nodes{0}, count{0};
    std::vector<std::optional<std::vector<std::uint32_t>>> found(shards);

    auto worker = [&] {
      std::uint64_t my_nodes = 0, my_count = 0;
      for (;;) {
        const auto shard = next.fetch_add(1);
        if (shard >= shards) break;
        if (!o_.count_all && shard > best.load()) continue;
        State st = root;
        st.x[first_free] = domains_[first_free][shard];
        ++my_nodes;
        std::vector<std::pair<std::size_t, std::uint64_t>> undo;
        if (!apply_var(first_free, st, &undo)) continue;
        auto abort = [&] { return !o_.count_all && best.load(std::memory_order_relaxed) < shard; };
        if (dfs(first_free + 1, st, my_nodes, my_count, abort)) {
          found[shard] = st.x;
          auto cur = best.load();
          while (shard < cur && !best.compare_exchange_weak(cur, shard)) {
          }
        }
      }
      nodes += my_nodes;
      count += my_count;
    };
    const unsigned jobs = std::max(1u, o_.jobs);
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
    result.nodes = nodes;
    if (o_.count_all) {
      result.count = count * (normalized_ ? q_ - 1 : 1);
    } else if (best.load() < shards) {
      result.witness = decode(*found[best.load()]);
    }
    return result;
  }

 private:
  struct Compiled {
    std::size_t list;
    std::vector<std::pair<std::size_t, std::uint32_t>> terms;  // (var, log of coefficient)
    std::uint32_t constant;
  };
  struct State {
    State(std::size_t n, std::size_t lists) : x(n, 0), masks(lists, 0) {}
    std::vector<std::uint32_t> x;
    std::vector<std::uint64_t> masks;
  };

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (prime_) {
      const auto s = a + b;
      return s >= q_ ? static_cast<std::uint32_t>(s - q_) : s;
    }
    return s_.field.add({a}, {b}).value;
  }

  std::uint32_t value(const Compiled& c, const std::vector<std::uint32_t>& x) const {
    auto v = c.constant;
    for (const auto& [var, coef_log] : c.terms) v = add(v, ex_[(coef_log + lg_[x[var]]) % (q_ - 1)]);
    return v;
  }

  bool apply(const Compiled& c, State& st, std::vector<std::pair<std::size_t, std::uint64_t>>* undo = nullptr) const {
    const auto v = value(c, st.x);
    if (v == 0) return false;
    const auto bit = std::uint64_t{1} << (lg_[v] % s_.e);
    if (st.masks[c.list] & bit) return false;
    st.masks[c.list] |= bit;
    if (undo) undo->push_back({c.list, bit});
    return true;
  }

  // Applies every form completed by variable v; on failure nothing is left set.
  bool apply_var(std::size_t v, State& st, std::vector<std::pair<std::size_t, std::uint64_t>>* undo = nullptr) const {
    std::vector<std::pair<std::size_t, std::uint64_t>> local;
    for (const auto& c : by_last_[v]) {
      if (!apply(c, st, &local)) {
        for (const auto& [l, bit] : local) st.masks[l] &= ~bit;
        return false;
      }
    }
    if (undo) undo->insert(undo->end(), local.begin(), local.end());
    return true;
  }

  template <class Abort>
  bool dfs(std::size_t v, State& st, std::uint64_t& nodes, std::uint64_t& count, const Abort& abort) const {
    if (v == n_) {
      if (o_.count_all) {
        ++count;
        return false;
      }
      return true;
    }
    if (abort()) return false;
    std::vector<std::pair<std::size_t, std::uint64_t>> undo;
    for (auto x : domains_[v]) {
      ++nodes;
      st.x[v] = x;
      undo.clear();
      if (!apply_var(v, st, &undo)) continue;
      if (dfs(v + 1, st, nodes, count, abort)) return true;
      for (const auto& [l, bit] : undo) st.masks[l] &= ~bit;
    }
    st.x[v] = 0;
    return false;
  }

  std::vector<FieldElement> decode(const std::vector<std::uint32_t>& x) const {
    std::vector<FieldElement> out;
    for (auto v : x) out.push_back({v});
    return out;
  }

  const TupleShape& s_;
  const SearchOptions& o_;
  std::uint64_t q_;
  std::size_t n_;
  std::size_t lists_ = 0;
  bool prime_ = false;
  bool normalized_ = false;
  std::vector<std::uint32_t> lg_, ex_;
  std::vector<std::vector<Compiled>> by_last_;
  std::vector<Compiled> constants_;
  std::vector<std::vector<std::uint32_t>> domains_;
};

}  // namespace

SearchResult search_tuple(const TupleShape& s, const SearchOptions& options) {
  if (s.e > 64) throw PreconditionError("class order above 64 is not supported by the search");
  return Engine(s, options).run();
}

// ---------------------------------------------------------------------------

std::vector<FieldElement> shape_companion(const TupleShape& s) {
  const auto& f = s.field;
  std::set<std::uint32_t> picks;
  for (auto x : cyclotomic_class(f, s.e, 0)) {
    if (s.name == "quint") {
      const auto y = f.mul(x, *s.epsilon);
      const auto z = f.mul(y, *s.epsilon);
      picks.insert(std::min({x.value, y.value, z.value}));
    } else {
      picks.insert(std::min(x.value, f.neg(x).value));
    }
  }
  std::vector<FieldElement> out;
  for (auto v : picks) out.push_back({v});
  return out;
}

BlockFamily shape_base(const std::string& name) {
  if (name == "quad" || name == "quad17") return fixture("z2_pairs");
  if (name == "quint") return fixture("doubled", AbelianGroup::cyclic(3));
  if (name == "sept") return fixture("order4_a", AbelianGroup({2, 2}));
  throw PreconditionError("unknown shape '" + name + "'");
}

Lifting lifting_from_tuple(const TupleShape& s, const std::vector<FieldElement>& t) {
  if (t.size() != s.variables.size()) throw PreconditionError("tuple has the wrong length for shape " + s.name);
  const auto& f = s.field;
  auto neg = [&](FieldElement x) { return f.neg(x); };
  auto mul = [&](FieldElement x, FieldElement y) { return f.mul(x, y); };
  Lifting l{shape_base(s.name), f, {}, shape_companion(s)};
  if (s.name == "quad") {
    const auto [a, b, c, d] = std::array{t[0], t[1], t[2], t[3]};
    l.blocks = {{{0, a}, {0, b}}, {{0, c}, {0, d}}, {{0, neg(a)}, {0, neg(c)}, {1, neg(b)}, {1, neg(d)}}};
  } else if (s.name == "quad17") {
    const auto [a, b, c, d] = std::array{t[0], t[1], t[2], t[3]};
    l.blocks = {{{0, a}, {0, neg(a)}}, {{0, b}, {0, c}}, {{0, neg(b)}, {0, d}, {1, neg(c)}, {1, neg(d)}}};
  } else if (s.name == "quint") {
    const auto eps = *s.epsilon;
    const auto eps2 = mul(eps, eps);
    auto orbit = [&](FieldElement x, bool spread) {
      return std::vector<LiftedPoint>{
          {0, x}, {spread ? Index{1} : Index{0}, mul(x, eps)}, {spread ? Index{2} : Index{0}, mul(x, eps2)}};
    };
    const auto e = t[4];
    l.blocks = {orbit(t[0], false), orbit(t[1], false), orbit(t[2], true), orbit(t[3], true),
                {{0, f.one()}, {0, e}, {1, eps}, {1, mul(e, eps)}, {2, eps2}, {2, mul(e, eps2)}}};
  } else if (s.name == "sept") {
    const auto [a, b, c, d, e, ff, g] = std::array{t[0], t[1], t[2], t[3], t[4], t[5], t[6]};
    // Z2 x Z2 indices: 00 -> 0, 01 -> 1, 10 -> 2, 11 -> 3
    l.blocks = {{{0, a}, {0, b}, {0, c}},
                {{0, d}, {0, e}, {1, g}, {2, neg(g)}, {3, ff}},
                {{1, neg(a)}, {1, neg(d)}, {2, neg(b)}, {2, neg(e)}, {3, neg(c)}, {3, neg(ff)}}};
  } else {
    throw PreconditionError("unknown shape '" + s.name + "'");
  }
  return l;
}

}  // namespace harmony
