#include "harmony/reproduce.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "harmony/constructors.hpp"
#include "harmony/errors.hpp"

#ifndef HARMONY_DATA_DIR
#define HARMONY_DATA_DIR "data"
#endif

namespace harmony {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("HARMONY_DATA_DIR"); env && *env) return env;
  return HARMONY_DATA_DIR;
}

namespace {

std::vector<std::string> words(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t to_u64(const std::string& s) {
  std::size_t pos = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("expected a number, got '" + s + "'");
  return v;
}

/// Data lines of a table file with the header checked and comments dropped.
std::vector<std::string> table_lines(std::string_view text) {
  std::vector<std::string> out;
  bool format_seen = false;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    const auto w = words(line);
    if (w.empty() || w[0].front() == '#') continue;
    if (w[0] == "format:") {
      if (w.size() != 2 || w[1] != std::to_string(format_version)) throw ParseError("unsupported table format");
      format_seen = true;
      continue;
    }
    if (w[0] == "kind:") continue;
    out.push_back(line);
  }
  if (!format_seen) throw ParseError("missing 'format:' header");
  return out;
}

std::map<std::uint64_t, std::uint64_t> parse_counts(const std::string& s, char sep) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& part : split(s, ',')) {
    const auto kv = split(part, sep);
    if (kv.size() != 2) throw ParseError("expected size" + std::string(1, sep) + "count, got '" + part + "'");
    out[to_u64(kv[0])] += to_u64(kv[1]);
  }
  return out;
}

std::string counts_text(const std::map<std::uint64_t, std::uint64_t>& m) {
  std::string s = "{";
  for (const auto& [k, n] : m) s += (s.size() > 1 ? "," : "") + std::to_string(k) + ":" + std::to_string(n);
  return s + "}";
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& w) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const auto eq = w[i].find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + w[i] + "'");
    out[w[i].substr(0, eq)] = w[i].substr(eq + 1);
  }
  return out;
}

std::map<std::string, std::map<std::string, std::string>> load_examples(const std::filesystem::path& dir) {
  std::map<std::string, std::map<std::string, std::string>> out;
  for (const auto& line : table_lines(read_file(dir / "examples.txt"))) {
    const auto w = words(line);
    out[w[0]] = key_values(w);
  }
  return out;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ParseError("example entry lacks '" + key + "'");
  return it->second;
}

std::multiset<std::vector<Index>> block_set(const std::vector<Block>& blocks) {
  std::multiset<std::vector<Index>> out;
  for (const auto& b : blocks) out.insert(b.elements());
  return out;
}

BlockFamily load_family(const std::filesystem::path& path) { return family_from_text(read_file(path)); }

void space_items(Report& r, const ResolvedSpace& s, const AbelianGroup& acting,
                 const std::map<std::uint64_t, std::uint64_t>& counts) {
  const auto cert = verify_space(s);
  r.add("linear space", cert.linear, cert.defect);
  r.add("resolution", cert.resolved, std::to_string(cert.classes) + " parallel classes");
  r.add("block counts", cert.counts == counts, "got " + counts_text(cert.counts) + ", expected " + counts_text(counts));
  const auto h = verify_harmonious(s, acting);
  r.add("harmonious under " + acting.describe(), h.harmonious(), h.defect);
}

// ---------------------------------------------------------------------------

Report example_z8(const ReproduceOptions& o) {
  Report r;
  const auto ex = load_examples(o.data_dir).at("z8");
  const auto s = space_from_text(read_file(o.data_dir / "z8_space.txt"));
  space_items(r, s, s.group(), parse_counts(need(ex, "counts"), ':'));
  return r;
}

Report sdf_catalog_report(const ReproduceOptions& o) {
  Report r;
  struct Expected {
    std::map<std::uint64_t, std::uint64_t> sizes;
    std::uint64_t lambda;
    bool used = false;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Expected> table;
  for (const auto& line : table_lines(read_file(o.data_dir / "sdf_catalog.txt"))) {
    const auto w = words(line);
    if (w.size() != 5) throw ParseError("catalog rows have five columns: '" + line + "'");
    const auto params = w[2] == "-" ? std::string() : w[2];
    table[{w[0], group_text(parse_group(w[1])), params}] = {parse_counts(w[3], '^'), to_u64(w[4])};
  }
  for (const auto& recipe : sdf_catalog()) {
    const auto name = recipe.name + " " + recipe.group.describe() + (recipe.parameters.empty() ? "" : " " + recipe.parameters);
    const auto it = table.find({recipe.name, group_text(recipe.group), recipe.parameters});
    if (it == table.end()) {
      r.add(name, false, "no expected row");
      continue;
    }
    it->second.used = true;
    const auto v = classify(recipe.build());
    const bool ok = v.kind == FamilyKind::strong && v.harmonious && v.sizes == it->second.sizes && v.lambda == it->second.lambda;
    r.add(name, ok,
          to_string(v.kind) + " " + counts_text(v.sizes) + " lambda=" + std::to_string(v.lambda) +
              (v.harmonious ? " harmonious" : " not harmonious"));
  }
  for (const auto& [key, e] : table) {
    if (!e.used) r.add(std::get<0>(key) + " " + std::get<1>(key), false, "expected row without a recipe");
  }
  return r;
}

/// The tuple route for a worked example, mapped to a cyclic group by CRT.
Report cyclic_example(const ReproduceOptions& o, const std::string& key, const std::string& rdf_file,
                      const std::optional<std::string>& pdf_file) {
  Report r;
  const auto ex = load_examples(o.data_dir).at(key);
  const auto q = to_u64(need(ex, "q"));
  const auto f = FiniteField::of_order(q);
  const auto shape = make_shape(need(ex, "shape"), f);
  std::vector<FieldElement> tuple;
  for (const auto& x : split(need(ex, "tuple"), ',')) tuple.push_back(parse_field_element(f, x));

  if (const auto e = ex.find("epsilon"); e != ex.end()) {
    r.add("epsilon", shape.epsilon && shape.epsilon->value == to_u64(e->second),
          shape.epsilon ? "got " + std::to_string(shape.epsilon->value) : "no epsilon");
  }
  r.add("tuple is good", tuple_is_good(shape, tuple));
  const auto l = lifting_from_tuple(shape, tuple);
  if (const auto c = ex.find("companion"); c != ex.end()) {
    std::vector<FieldElement> want;
    for (const auto& x : split(c->second, ',')) want.push_back(f.element(to_u64(x)));
    r.add("companion", l.companion == want);
  }
  const auto lc = verify_lifting(l);
  r.add("lifting is perfect", lc.perfect, lc.defect);
  if (!lc.good) return r;

  const auto fam = expand(l);
  std::vector<std::int64_t> coeffs;
  for (const auto& x : split(need(ex, "crt"), ',')) coeffs.push_back(std::stoll(x));
  const auto crt = CrtMap::with_coefficients(fam.group, coeffs);
  const auto cyclic = AbelianGroup::cyclic(crt.modulus());
  BlockFamily mapped{cyclic, {}};
  for (const auto& b : fam.blocks()) {
    std::vector<Index> xs;
    for (auto x : b.elements()) xs.push_back(crt.to_cyclic(x));
    mapped.entries.push_back({Block::of(xs), 1});
  }
  const auto rdf = load_family(o.data_dir / rdf_file);
  r.add("expanded family matches " + rdf_file, block_set(mapped.blocks()) == block_set(rdf.blocks()));

  std::vector<Index> hs;
  for (const auto& x : split(need(ex, "subgroup"), ',')) hs.push_back(to_u64(x));
  const auto h = Subgroup::from_elements(cyclic, hs);
  const auto rv = classify(mapped, h);
  r.add("relative DF, resolvable", rv.kind == FamilyKind::relative && rv.lambda == 1 && rv.resolvable, rv.reason);

  const auto pdf = pdf_from_rdf(mapped, h);
  const auto pv = classify(pdf.family());
  const auto want_pdf = parse_counts(need(ex, "pdf"), ':');
  const auto want_lambda = to_u64(need(ex, "pdf_lambda"));
  r.add("partitioned DF", pv.kind == FamilyKind::partitioned && pv.sizes == want_pdf && pv.lambda == want_lambda,
        counts_text(pv.sizes) + " lambda=" + std::to_string(pv.lambda));
  if (pdf_file) {
    const auto want = load_family(o.data_dir / *pdf_file);
    r.add("PDF blocks match " + *pdf_file, block_set(pdf.blocks) == block_set(want.blocks()));
  }
  const auto s = develop(pdf);
  space_items(r, s, cyclic, parse_counts(need(ex, "counts"), ':'));
  return r;
}

std::string classes_text(const TupleShape& s, const std::vector<FieldElement>& t) {
  std::string out;
  for (std::size_t i = 0; i < s.lists.size(); ++i) {
    out += (i ? " " : "") + s.list_names[i] + "=(";
    for (std::size_t j = 0; j < s.lists[i].size(); ++j) {
      const auto v = evaluate(s, s.lists[i][j], t);
      out += (j ? "," : "") + (v == s.field.zero() ? std::string("0") : std::to_string(cyclotomic_index(s.field, s.e, v)));
    }
    out += ")";
  }
  return out;
}

void table_rows(Report& r, const TupleTable& t) {
  for (const auto& row : t.rows) {
    const auto f = row_field(row);
    const auto tuple = row_tuple(f, row);
    const auto shape = make_shape(t.shape, f);
    const bool good = tuple_is_good(shape, tuple);
    bool perfect = false;
    if (good) perfect = verify_lifting(lifting_from_tuple(shape, tuple)).perfect;
    r.add("q=" + std::to_string(row.q) + " row", good && perfect, "classes " + classes_text(shape, tuple));
  }
}

void none_found(Report& r, const std::string& shape_name, std::uint64_t q, unsigned jobs) {
  const auto shape = make_shape(shape_name, FiniteField::of_order(q));
  SearchOptions so;
  so.jobs = jobs;
  const auto res = search_tuple(shape, so);
  r.add("q=" + std::to_string(q) + " none found", !res.witness, std::to_string(res.nodes) + " nodes");
}

Report table_quadruples(const ReproduceOptions& o) {
  Report r;
  const auto t = parse_tuple_table(read_file(o.data_dir / "quadruples.txt"));
  table_rows(r, t);
  none_found(r, "quad", 17, o.jobs);
  std::vector<std::uint64_t> missing;
  std::uint64_t searched = 0;
  for (std::uint64_t q = 18; q <= o.quad_sweep_limit; ++q) {
    if (q % 8 != 1 || !prime_power(q)) continue;
    ++searched;
    SearchOptions so;
    so.jobs = o.jobs;
    if (!search_tuple(make_shape("quad", FiniteField::of_order(q)), so).witness) missing.push_back(q);
  }
  std::string detail = std::to_string(searched) + " prime powers";
  for (auto q : missing) detail += ", none at " + std::to_string(q);
  r.add("search 17<q<=" + std::to_string(o.quad_sweep_limit), missing.empty(), detail);
  return r;
}

Report table_septuples(const ReproduceOptions& o) {
  Report r;
  const auto t = parse_tuple_table(read_file(o.data_dir / "septuples.txt"));
  table_rows(r, t);
  for (auto q : t.none) none_found(r, t.shape, q, o.jobs);
  return r;
}

Report q_bounds(const ReproduceOptions& o) {
  Report r;
  for (const auto& line : table_lines(read_file(o.data_dir / "qbounds.txt"))) {
    const auto w = words(line);
    if (w.size() != 3) throw ParseError("q-bound rows have three columns");
    const auto b = q_bound(to_u64(w[0]), to_u64(w[1]));
    r.add("Q(" + w[0] + "," + w[1] + ")", b.threshold == QBound::Int(w[2]),
          "threshold " + b.threshold.str() + ", exact " + b.value().str(12));
  }
  bool monotone = true;
  for (std::uint64_t e = 2; e <= 8; ++e) {
    for (std::uint64_t n = 1; n < 8; ++n) monotone = monotone && q_bound(e, n).value() < q_bound(e, n + 1).value();
  }
  r.add("increasing in n for e<=8, n<=8", monotone);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::map<std::string, std::string> example_entry(const std::filesystem::path& data_dir, const std::string& name) {
  const auto all = load_examples(data_dir);
  const auto it = all.find(name);
  if (it == all.end()) throw PreconditionError("no example '" + name + "' in " + (data_dir / "examples.txt").string());
  return it->second;
}

TupleTable parse_tuple_table(std::string_view text) {
  TupleTable t;
  for (const auto& line : table_lines(text)) {
    auto w = words(line);
    if (w[0] == "shape:") {
      t.shape = w.at(1);
    } else if (w[0] == "none:") {
      for (std::size_t i = 1; i < w.size(); ++i) t.none.push_back(to_u64(w[i]));
    } else {
      if (w.size() < 3) throw ParseError("table row too short: '" + line + "'");
      TupleTable::Row row;
      row.q = to_u64(w[0]);
      if (w[1] != "-") row.modulus = parse_modulus(w[1]);
      row.tuple.assign(w.begin() + 2, w.end());
      t.rows.push_back(std::move(row));
    }
  }
  if (t.shape.empty()) throw ParseError("table lacks 'shape:'");
  return t;
}

FiniteField row_field(const TupleTable::Row& row) {
  const auto pm = prime_power(row.q);
  if (!pm) throw ParseError(std::to_string(row.q) + " is not a prime power");
  return FiniteField(pm->first, pm->second, row.modulus);
}

std::vector<FieldElement> row_tuple(const FiniteField& f, const TupleTable::Row& row) {
  std::vector<FieldElement> out;
  for (const auto& x : row.tuple) out.push_back(parse_field_element(f, x));
  return out;
}

bool Report::pass() const {
  for (const auto& i : items) {
    if (!i.pass) return false;
  }
  return !items.empty();
}

void Report::add(std::string name, bool pass, std::string detail) {
  items.push_back({std::move(name), pass, std::move(detail)});
}

std::vector<std::string> reproduce_targets() {
  return {"example-z8", "sdf-catalog", "example-z34", "example-z57", "table-quadruples", "table-septuples", "q-bounds"};
}

Report reproduce(const std::string& target, const ReproduceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  try {
    if (target == "example-z8") {
      r = example_z8(options);
    } else if (target == "sdf-catalog") {
      r = sdf_catalog_report(options);
    } else if (target == "example-z34") {
      r = cyclic_example(options, "z34", "z34_rdf.txt", std::nullopt);
    } else if (target == "example-z57") {
      r = cyclic_example(options, "z57", "z57_rdf.txt", "z57_pdf.txt");
    } else if (target == "table-quadruples") {
      r = table_quadruples(options);
    } else if (target == "table-septuples") {
      r = table_septuples(options);
    } else if (target == "q-bounds") {
      r = q_bounds(options);
    } else {
      throw PreconditionError("unknown reproduce target '" + target + "'");
    }
  } catch (const ParseError& e) {
    throw PreconditionError("bad data for " + target + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw PreconditionError("missing example entry for " + target);
  }
  r.target = target;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

json to_json(const Report& r) {
  json items = json::array();
  for (const auto& i : r.items) items.push_back({{"name", i.name}, {"pass", i.pass}, {"detail", i.detail}});
  return {{"target", r.target}, {"pass", r.pass()}, {"items", items}};
}

std::string report_text(const Report& r) {
  std::string s;
  for (const auto& i : r.items) {
    s += std::string(i.pass ? "PASS" : "FAIL") + "  " + r.target + ": " + i.name;
    if (!i.detail.empty()) s += "  [" + i.detail + "]";
    s += "\n";
  }
  s += std::string(r.pass() ? "PASS" : "FAIL") + "  " + r.target + "\n";
  return s;
}

// ---------------------------------------------------------------------------

PipelineResult run_pipeline(const std::set<std::uint64_t>& k, std::uint64_t q, const PipelineOptions& options) {
  if (k.empty() || *k.begin() < 2) throw PreconditionError("K must be a nonempty set of sizes >= 2");
  const auto pm = prime_power(q);
  if (!pm) throw PreconditionError(std::to_string(q) + " is not a prime power");
  const FiniteField f(pm->first, pm->second, options.modulus);

  PipelineResult r;
  r.route = "generic";
  if (k == std::set<std::uint64_t>{2, 4} && q % 8 == 1 && q > 9) r.route = q == 17 ? "quad17" : "quad";
  if (k == std::set<std::uint64_t>{3, 6} && q % 36 == 19) r.route = "quint";
  if (k == std::set<std::uint64_t>{3, 4, 5, 6} && q % 14 == 1) r.route = "sept";

  std::optional<Lifting> found;
  if (r.route != "generic") {
    const auto shape = make_shape(r.route, f);
    SearchOptions so;
    so.strategy = options.strategy;
    so.seed = options.seed;
    so.jobs = options.jobs;
    const auto res = search_tuple(shape, so);
    if (!res.witness) {
      r.status = PipelineStatus::exhausted;
      r.message = "no good " + r.route + " tuple over GF(" + std::to_string(q) + ") (" + std::to_string(res.nodes) + " nodes)";
      return r;
    }
    r.witness = res.witness;
    found = lifting_from_tuple(shape, *res.witness);
    r.sdf = found->base;
  } else {
    const auto a = assemble_for_k(k);
    r.sdf = a.family;
    const auto lambda = a.lambda;
    if ((q - 1) % (2 * lambda) != lambda) {
      throw PreconditionError("the assembled SDF has lambda = " + std::to_string(lambda) + "; q must be " +
                              std::to_string(lambda + 1) + " mod " + std::to_string(2 * lambda));
    }
    GenericLiftingOptions go;
    go.strategy = options.strategy;
    go.seed = options.seed;
    go.greedy = options.greedy;
    go.max_nodes = options.max_nodes;
    const auto res = generic_perfect_lifting(a.family, f, go);
    if (!res.lifting) {
      r.status = PipelineStatus::exhausted;
      r.message = "lifting search exhausted after " + std::to_string(res.nodes) + " nodes";
      if (res.node_limit_hit) r.message += " (node limit)";
      if (res.failed_block) r.message += " at block " + std::to_string(*res.failed_block);
      return r;
    }
    found = res.lifting;
  }
  r.lifting = found;
  const auto& lifting = *found;

  const auto lc = verify_lifting(lifting);
  if (!lc.perfect) {
    r.status = PipelineStatus::mismatch;
    r.message = "lifting is not perfect: " + lc.defect;
    return r;
  }
  try {
    const auto fam = expand(lifting);
    const auto pdf = pdf_from_rdf(fam, Subgroup::head(fam.group, q));
    r.space = develop(pdf);
  } catch (const VerificationError& e) {
    r.status = PipelineStatus::mismatch;
    r.message = e.what();
    return r;
  }

  const auto v = verdicts(Object(*r.space));
  std::set<std::uint64_t> sizes;
  for (const auto& [size, n] : count_blocks(*r.space)) sizes.insert(size);
  const bool ok = verdicts_pass("space", v) && sizes == k;
  r.status = ok ? PipelineStatus::ok : PipelineStatus::mismatch;
  if (sizes != k) r.message = "block sizes differ from K";

  json extra{{"pipeline",
              {{"K", k},
               {"q", q},
               {"route", r.route},
               {"field", field_to_json(f)},
               {"sdf", family_to_json(r.sdf)},
               {"lifting", to_json(lc)}}}};
  if (r.witness) {
    json w = json::array();
    for (auto x : *r.witness) w.push_back(element_to_json(f, x));
    extra["pipeline"]["witness"] = w;
  }
  r.certificate = make_certificate(Object(*r.space), v, extra);
  return r;
}

}  // namespace harmony
