// Acceptance run: one PASS/FAIL line per criterion, each with its time limit.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

#include "harmony/constructors.hpp"
#include "harmony/errors.hpp"
#include "harmony/io.hpp"
#include "harmony/reproduce.hpp"

using namespace harmony;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

std::string failed_items(const Report& r) {
  std::string s;
  for (const auto& i : r.items) {
    if (!i.pass) s += (s.empty() ? "" : "; ") + i.name + (i.detail.empty() ? "" : " [" + i.detail + "]");
  }
  return s;
}

Outcome from_report(const std::string& target) {
  ReproduceOptions o;
  o.jobs = jobs;
  const auto r = reproduce(target, o);
  return {r.pass(), r.pass() ? std::to_string(r.items.size()) + " items" : "failed: " + failed_items(r)};
}

std::vector<FieldElement> example_tuple(const FiniteField& f, const std::string& name) {
  std::vector<FieldElement> t;
  std::istringstream in(example_entry(default_data_dir(), name).at("tuple"));
  for (std::string x; std::getline(in, x, ',');) t.push_back(parse_field_element(f, x));
  return t;
}

std::set<std::uint64_t> size_set(const ResolvedSpace& s) {
  std::set<std::uint64_t> out;
  for (const auto& [k, n] : count_blocks(s)) out.insert(k);
  return out;
}

/// Expand a perfect lifting, develop it over G x {0} and check the space.
std::string space_check(const BlockFamily& rdf, std::uint64_t tail, std::uint64_t v, const std::set<std::uint64_t>& k,
                        bool& ok) {
  const auto h = Subgroup::head(rdf.group, tail);
  const auto rv = classify(rdf, h);
  const auto s = develop(pdf_from_rdf(rdf, h));
  const auto c = verify_space(s);
  const auto hc = verify_harmonious(s, rdf.group);
  ok = rv.kind == FamilyKind::relative && rv.lambda == 1 && rv.resolvable && c.ok() && c.exhaustive && s.v() == v &&
       size_set(s) == k && hc.harmonious();
  std::ostringstream d;
  d << "v=" << s.v() << " blocks=" << s.block_count() << (c.exhaustive ? " exhaustive" : " sampled")
    << (c.ok() ? " linear+resolved" : " BROKEN " + c.defect) << (hc.harmonious() ? " harmonious" : " NOT harmonious");
  return d.str();
}

Outcome z8() {
  const auto s = space_from_text(read_file(default_data_dir() / "z8_space.txt"));
  const auto c = verify_space(s);
  const auto h = verify_harmonious(s, AbelianGroup::cyclic(8));
  const bool ok = c.ok() && c.exhaustive && s.v() == 8 && size_set(s) == std::set<std::uint64_t>{2, 3} && h.harmonious();
  return {ok, "HS(2,{2,3},8), " + std::to_string(s.class_count()) + " classes"};
}

Outcome fund_sweep() {
  std::size_t n_checked = 0;
  for (std::uint64_t order = 1; order <= 5; ++order) {
    for (const auto& g : abelian_groups_of_order(order)) {
      const auto k = order;
      for (std::uint64_t h = k + 2; h <= 9; ++h) {
        const auto v = classify(fund_sdf(g, h));
        const std::map<std::uint64_t, std::uint64_t> want{{k, h * (h - k - 1)}, {h, k}};
        ++n_checked;
        if (v.kind != FamilyKind::strong || !v.harmonious || v.lambda != h * k * (h - k) || v.sizes != want) {
          return {false, g.describe() + " h=" + std::to_string(h) + ": " + to_string(v.kind) + " lambda=" +
                             std::to_string(v.lambda)};
        }
      }
    }
  }
  return {true, std::to_string(n_checked) + " (G, h) pairs"};
}

Outcome field_extension() {
  bool ok17 = false, ok19 = false;
  std::string d;
  {
    const auto f = FiniteField::of_order(17);
    const auto shape = make_shape("quad17", f);
    const auto big = extend_field(lifting_from_tuple(shape, example_tuple(f, "z34")), 2);
    const auto lc = verify_lifting(big);
    d += "F289 " + std::string(lc.perfect ? "perfect" : "NOT perfect") + ", ";
    if (lc.perfect) d += space_check(expand(big), 289, 578, {2, 4}, ok17);
  }
  {
    const auto f = FiniteField::of_order(19);
    const auto shape = make_shape("quint", f);
    const auto big = extend_field(lifting_from_tuple(shape, example_tuple(f, "z57")), 2);
    const auto lc = verify_lifting(big);
    d += "; F361 " + std::string(lc.perfect ? "perfect" : "NOT perfect") + ", ";
    if (lc.perfect) d += space_check(expand(big), 361, 1083, {3, 6}, ok19);
  }
  return {ok17 && ok19, d};
}

Outcome composition() {
  const auto table = parse_tuple_table(read_file(default_data_dir() / "quadruples.txt"));
  auto rdf_for = [&](std::uint64_t q) {
    for (const auto& row : table.rows) {
      if (row.q != q) continue;
      const auto f = row_field(row);
      return expand(lifting_from_tuple(make_shape("quad", f), row_tuple(f, row)));
    }
    throw PreconditionError("no quadruple row for q = " + std::to_string(q));
  };
  const auto g = AbelianGroup::cyclic(2);
  const auto fam = compose(g, rdf_for(41), rdf_for(73), field_dm(FiniteField::of_order(73), 4));
  bool ok = false;
  const auto d = space_check(fam, 41 * 73, 5986, {2, 4}, ok);
  return {ok, "over " + fam.group.describe() + ": " + d};
}

Outcome properties() {
  std::vector<std::string> bad;
  // psi symmetry and class coverage of every plan over the catalog
  std::size_t plans = 0;
  for (const auto& r : sdf_catalog()) {
    const auto sdf = r.build();
    const auto plan = make_lifting_plan(sdf);
    ++plans;
    const auto lam = static_cast<std::int64_t>(plan.lambda);
    for (std::size_t h = 0; h < plan.psi.size(); ++h) {
      for (std::size_t i = 0; i < plan.psi[h].size(); ++i) {
        for (std::size_t j = 0; j < plan.psi[h].size(); ++j) {
          if (i != j && plan.psi[h][j][i] != (plan.psi[h][i][j] + lam / 2) % lam) bad.push_back("psi " + r.name);
        }
      }
    }
    for (const auto& tg : plan.triples) {
      std::vector<int> seen(plan.lambda, 0);
      for (const auto& t : tg) ++seen[plan.psi[t.h][t.i][t.j]];
      if (std::count(seen.begin(), seen.end(), 1) != lam) bad.push_back("T_g " + r.name);
    }
    // translation invariance of differences, and the counting identity
    for (const auto& b : sdf.blocks()) {
      const auto d = delta_block(sdf.group, b);
      for (Index x = 0; x < sdf.group.order(); ++x) {
        if (delta_block(sdf.group, b.translated(sdf.group, x)) != d) bad.push_back("delta " + r.name);
      }
    }
    const auto v = classify(sdf);
    std::uint64_t pairs = 0;
    for (const auto& [k, n] : v.sizes) pairs += n * k * (k - 1);
    if (v.lambda * sdf.group.order() != pairs) bad.push_back("counting " + r.name);
  }
  for (std::uint64_t n = 1; n <= 5; ++n) {
    for (const auto& g : abelian_groups_of_order(n)) {
      for (std::uint64_t h = n + 2; h <= 9; ++h) {
        const auto v = classify(fund_sdf(g, h));
        std::uint64_t pairs = 0;
        for (const auto& [k, c] : v.sizes) pairs += c * k * (k - 1);
        if (v.lambda * g.order() != pairs) bad.push_back("counting fund");
      }
    }
  }
  // stabilizer of the base class equals H on developed fixtures
  std::vector<std::pair<BlockFamily, Subgroup>> fixtures;
  const auto dir = default_data_dir();
  fixtures.push_back({family_from_text(read_file(dir / "z34_rdf.txt")), Subgroup::from_elements(AbelianGroup::cyclic(34), {0, 17})});
  fixtures.push_back({family_from_text(read_file(dir / "z57_rdf.txt")), Subgroup::generated(AbelianGroup::cyclic(57), {19})});
  for (const auto& [name, q] : std::vector<std::pair<std::string, std::uint64_t>>{{"quad", 41}, {"quint", 127}, {"sept", 71}}) {
    const auto f = FiniteField::of_order(q);
    const auto shape = make_shape(name, f);
    const auto w = search_tuple(shape).witness;
    if (!w) {
      bad.push_back("no " + name + " witness");
      continue;
    }
    const auto fam = expand(lifting_from_tuple(shape, *w));
    fixtures.push_back({fam, Subgroup::head(fam.group, q)});
  }
  for (const auto& [fam, h] : fixtures) {
    const auto p = pdf_from_rdf(fam, h);
    if (partition_stabilizer(p.group, p.blocks) != h.elements()) bad.push_back("stabilizer " + fam.group.describe());
    if (verify_harmonious(develop(p), p.group).stabilizer != h.elements()) bad.push_back("class stabilizer " + fam.group.describe());
  }
  // lex-first and seeded searches do not depend on the worker count
  for (const auto& [name, q] : std::vector<std::pair<std::string, std::uint64_t>>{
           {"quad", 41}, {"quad", 97}, {"quad", 257}, {"quad17", 41}, {"quint", 127}, {"sept", 71}, {"sept", 113}}) {
    const auto shape = make_shape(name, FiniteField::of_order(q));
    for (auto strategy : {Strategy::lex, Strategy::random}) {
      SearchOptions a;
      a.strategy = strategy;
      a.seed = 5;
      a.jobs = 1;
      auto b = a;
      b.jobs = 4;
      if (search_tuple(shape, a).witness != search_tuple(shape, b).witness) bad.push_back("determinism " + name);
    }
  }
  for (const auto& [k, q] : std::vector<std::pair<std::set<std::uint64_t>, std::uint64_t>>{{{2, 4}, 41}, {{3, 6}, 19}}) {
    PipelineOptions a;
    auto b = a;
    b.jobs = 4;
    if (run_pipeline(k, q, a).certificate.dump() != run_pipeline(k, q, b).certificate.dump()) bad.push_back("pipeline determinism");
  }
  std::string d = std::to_string(plans) + " plans, " + std::to_string(fixtures.size()) + " developed fixtures";
  for (const auto& b : bad) d += "; " + b;
  return {bad.empty(), d};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Z8 space is an HS(2,{2,3},8), harmonious under Z8", 1, z8},
      {2, "SDF catalog signatures", 1, [] { return from_report("sdf-catalog"); }},
      {3, "fund_sdf sweep, |G| <= 5, k+2 <= h <= 9", 5, fund_sweep},
      {4, "Q(e,n) thresholds and monotonicity", 5, [] { return from_report("q-bounds"); }},
      {5, "Z34 worked example end to end", 1, [] { return from_report("example-z34"); }},
      {6, "Z57 worked example end to end", 1, [] { return from_report("example-z57"); }},
      {7, "quadruple table, sweep 17 < q <= 1000, none at 17", 60, [] { return from_report("table-quadruples"); }},
      {8, "septuple table, none at 29 and 43", 600, [] { return from_report("table-septuples"); }},
      {9, "field extension to 289 and 361, HS on 578 and 1083 points", 120, field_extension},
      {10, "composition 41 x 73, S(2,{2,4},5986)", 600, composition},
      {11, "property suite", 120, properties},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (t > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit";
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %s  (%.2f s / %.0f s)  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), t,
                c.limit_seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
