#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <set>

#include "harmony/constructors.hpp"
#include "harmony/errors.hpp"
#include "harmony/io.hpp"
#include "harmony/reproduce.hpp"

namespace harmony {

namespace {

struct Common {
  std::string format = "auto";
  std::string output;
};

struct Emitter {
  const Common& common;
  std::ostream& out;
  bool text(bool text_by_default = false) const {
    return common.format == "text" || (common.format == "auto" && text_by_default);
  }
  void operator()(const std::string& content) const {
    if (common.output.empty()) {
      out << content;
    } else {
      write_file(common.output, content);
    }
  }
  void operator()(const json& j) const { (*this)(j.dump(2) + "\n"); }
};

std::set<std::uint64_t> parse_sizes(const std::string& text) {
  std::set<std::uint64_t> out;
  for (auto x : parse_elements(AbelianGroup::cyclic(std::uint64_t{1} << 62), text)) out.insert(x);
  if (out.empty()) throw PreconditionError("empty size set");
  return out;
}

FiniteField make_field(std::uint64_t q, const std::string& modulus) {
  const auto pm = prime_power(q);
  if (!pm) throw PreconditionError(std::to_string(q) + " is not a prime power");
  std::optional<std::vector<std::uint32_t>> m;
  if (!modulus.empty()) m = parse_modulus(modulus);
  return FiniteField(pm->first, pm->second, m);
}

Strategy parse_strategy(const std::string& s, const std::optional<std::uint64_t>& seed) {
  if (s == "lex") return Strategy::lex;
  if (!seed) throw PreconditionError("--strategy random needs --seed");
  return Strategy::random;
}

struct RecipeArgs {
  std::string name;
  std::string group;
  std::uint64_t h = 0;
  std::string sizes;
};

BlockFamily build_recipe(const RecipeArgs& a) {
  std::optional<AbelianGroup> g;
  if (!a.group.empty()) g = parse_group(a.group);
  if (a.name == "classic") {
    if (!g) throw PreconditionError("classic needs --group");
    return classic_sdf(*g);
  }
  if (a.name == "fund") {
    if (!g || a.h == 0) throw PreconditionError("fund needs --group and --fund-h");
    return fund_sdf(*g, a.h);
  }
  if (a.name == "assemble") {
    if (a.sizes.empty()) throw PreconditionError("assemble needs --K");
    return assemble_for_k(parse_sizes(a.sizes), g).family;
  }
  const auto names = fixture_names();
  if (std::find(names.begin(), names.end(), a.name) == names.end()) {
    throw PreconditionError("unknown recipe '" + a.name + "'");
  }
  return fixture(a.name, g);
}

/// Families pass through; liftings and tuples are expanded, and the
/// subgroup G x {0} they are relative to is reported.
BlockFamily as_family(const Object& o, std::optional<Subgroup>& natural) {
  if (const auto* f = std::get_if<BlockFamily>(&o)) return *f;
  std::optional<Lifting> l;
  if (const auto* x = std::get_if<Lifting>(&o)) l = *x;
  if (const auto* t = std::get_if<TupleWitness>(&o)) l = lifting_from_tuple(make_shape(t->shape, t->field), t->tuple);
  if (!l) throw PreconditionError("expected a family, lifting or tuple, got a space");
  auto fam = expand(*l);
  natural = Subgroup::head(fam.group, l->field.order());
  return fam;
}

json subgroup_json(const Subgroup& h) { return h.elements(); }

std::optional<Subgroup> subgroup_from_certificate(const json& cert, const Object& o) {
  if (!cert.contains("subgroup")) return std::nullopt;
  const auto* f = std::get_if<BlockFamily>(&o);
  if (!f) return std::nullopt;
  return Subgroup::from_elements(f->group, cert.at("subgroup").get<std::vector<Index>>());
}

std::optional<Subgroup> parse_subgroup(const AbelianGroup& g, const std::string& elements, std::uint64_t head) {
  if (!elements.empty()) return Subgroup::generated(g, parse_elements(g, elements));
  if (head) return Subgroup::head(g, head);
  return std::nullopt;
}

int exit_for(bool pass) { return pass ? exit_ok : exit_mismatch; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonious linear spaces: construct, lift, search, develop and verify"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", tool_version());
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"auto", "json", "text"}))
      ->capture_default_str();
  app.add_option("-o,--output", common.output, "Write output to a file");
  const Emitter emit{common, out};

  // construct
  RecipeArgs recipe;
  auto* construct = app.add_subcommand("construct", "Build a harmonious SDF");
  construct->add_option("recipe", recipe.name, "classic, fund, assemble or a fixture name")->required();
  construct->add_option("--group", recipe.group, "Group such as 9, 2x2 or Z4xZ2");
  construct->add_option("--fund-h", recipe.h, "Parameter h of fund");
  construct->add_option("--K", recipe.sizes, "Size set for assemble, e.g. 3,4,5");

  // lift
  std::string sdf_file;
  std::uint64_t q = 0;
  std::string modulus;
  std::string strategy = "lex";
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  bool greedy = false;
  std::uint64_t max_nodes = 0;
  auto* lift = app.add_subcommand("lift", "Perfect lifting of an SDF over GF(q) by backtracking");
  lift->add_option("--sdf", sdf_file, "Family file");
  lift->add_option("--recipe", recipe.name, "Build the SDF instead of reading it");
  lift->add_option("--group", recipe.group);
  lift->add_option("--fund-h", recipe.h);
  lift->add_option("--K", recipe.sizes);
  lift->add_option("--q", q, "Field order")->required();
  lift->add_option("--modulus", modulus, "Coefficients, low degree first");
  lift->add_option("--strategy", strategy)->check(CLI::IsMember({"lex", "random"}));
  lift->add_option("--seed", seed);
  lift->add_flag("--greedy", greedy, "First candidate only, no backtracking");
  lift->add_option("--max-nodes", max_nodes, "0 = unlimited");

  // search
  std::string shape_name;
  bool all_witnesses = false;
  auto* search = app.add_subcommand("search", "Search for a good tuple");
  search->add_option("--shape", shape_name)->required()->check(CLI::IsMember(shape_names()));
  search->add_option("--q", q)->required();
  search->add_option("--modulus", modulus);
  search->add_option("--strategy", strategy)->check(CLI::IsMember({"lex", "random"}));
  search->add_option("--seed", seed);
  search->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  search->add_flag("--all-witnesses", all_witnesses, "Count every good tuple");

  // compose
  std::string group_text_arg, fx_file, fy_file;
  std::uint64_t dm_rows = 0;
  auto* compose_cmd = app.add_subcommand("compose", "Compose resolvable DFs over G x X and G x Y");
  compose_cmd->add_option("--group", group_text_arg, "The common group G")->required();
  compose_cmd->add_option("--fx", fx_file)->required();
  compose_cmd->add_option("--fy", fy_file)->required();
  compose_cmd->add_option("--dm-rows", dm_rows, "Rows of the field difference matrix (default: largest F_X block)");
  compose_cmd->add_option("--modulus", modulus, "Modulus of the field Y");

  // develop
  std::string input, subgroup_text;
  std::uint64_t head = 0;
  auto* develop_cmd = app.add_subcommand("develop", "Develop a resolvable relative DF into a resolved space");
  develop_cmd->add_option("input", input)->required();
  develop_cmd->add_option("--subgroup", subgroup_text, "Elements or generators of H");
  develop_cmd->add_option("--head", head, "H = A x {0} inside A x B with |B| = head");

  // verify
  auto* verify = app.add_subcommand("verify", "Recompute verdicts for any object or certificate");
  verify->add_option("input", input)->required();
  verify->add_option("--subgroup", subgroup_text);
  verify->add_option("--head", head);

  // reproduce
  std::string target = "all";
  std::string data_dir;
  std::uint64_t quad_limit = 1000;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Rebuild a worked example or table and diff it");
  std::vector<std::string> targets = reproduce_targets();
  targets.push_back("all");
  reproduce_cmd->add_option("target", target)->check(CLI::IsMember(targets));
  reproduce_cmd->add_option("--data-dir", data_dir);
  reproduce_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  reproduce_cmd->add_option("--quad-limit", quad_limit, "Largest q of the fresh quadruple sweep");

  // pipeline
  std::string sizes;
  auto* pipeline = app.add_subcommand("pipeline", "From a size set K and q to a verified harmonious space");
  pipeline->add_option("--K", sizes)->required();
  pipeline->add_option("--q", q)->required();
  pipeline->add_option("--modulus", modulus);
  pipeline->add_option("--strategy", strategy)->check(CLI::IsMember({"lex", "random"}));
  pipeline->add_option("--seed", seed);
  pipeline->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  pipeline->add_flag("--greedy", greedy);
  pipeline->add_option("--max-nodes", max_nodes);

  // qbound
  std::uint64_t e = 0, n = 0;
  auto* qbound = app.add_subcommand("qbound", "Threshold ceil(Q(e,n))");
  qbound->add_option("--e", e)->required()->check(CLI::Range(1, 64));
  qbound->add_option("--n", n)->required()->check(CLI::Range(1, 64));

  std::vector<std::string> argv_store{"harmony"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? exit_ok : exit_precondition;
  }

  try {
    if (construct->parsed()) {
      const Object obj = build_recipe(recipe);
      const auto v = verdicts(obj);
      if (emit.text()) {
        emit(family_to_text(std::get<BlockFamily>(obj)));
      } else {
        emit(make_certificate(obj, v, {{"recipe", recipe.name}}));
      }
      return exit_for(verdicts_pass("family", v));
    }

    if (lift->parsed()) {
      BlockFamily sdf;
      if (!sdf_file.empty()) {
        std::optional<Subgroup> unused;
        sdf = as_family(load_object(sdf_file), unused);
      } else if (!recipe.name.empty()) {
        sdf = build_recipe(recipe);
      } else {
        throw PreconditionError("lift needs --sdf or --recipe");
      }
      const auto f = make_field(q, modulus);
      GenericLiftingOptions go;
      go.strategy = parse_strategy(strategy, seed);
      go.seed = seed.value_or(0);
      go.greedy = greedy;
      go.max_nodes = max_nodes;
      const auto res = generic_perfect_lifting(sdf, f, go);
      if (!res.lifting) {
        json j{{"status", "exhausted"}, {"nodes", res.nodes}, {"node_limit_hit", res.node_limit_hit}};
        if (res.failed_block) j["failed_block"] = *res.failed_block;
        emit(j);
        return exit_exhausted;
      }
      const Object obj = *res.lifting;
      const auto v = verdicts(obj);
      if (emit.text()) {
        emit(family_to_text(expand(*res.lifting)));
      } else {
        emit(make_certificate(obj, v, {{"strategy", strategy}, {"greedy", greedy}}));
      }
      return exit_for(v.at("perfect").get<bool>());
    }

    if (search->parsed()) {
      const auto f = make_field(q, modulus);
      const auto shape = make_shape(shape_name, f);
      SearchOptions so;
      so.strategy = parse_strategy(strategy, seed);
      so.seed = seed.value_or(0);
      so.jobs = jobs;
      auto res = search_tuple(shape, so);
      if (all_witnesses) {
        so.count_all = true;
        res.count = search_tuple(shape, so).count;
      }
      json extra{{"search", {{"strategy", strategy}}}};
      if (seed) extra["search"]["seed"] = *seed;
      if (all_witnesses) extra["search"]["count"] = res.count;
      if (!res.witness) {
        json j{{"status", "exhausted"}, {"shape", shape_name}, {"field", field_to_json(f)}};
        if (all_witnesses) j["count"] = 0;
        if (emit.text()) {
          emit("none: " + shape_name + " over GF(" + std::to_string(q) + ")\n");
        } else {
          emit(j);
        }
        return exit_exhausted;
      }
      const Object obj = TupleWitness{shape_name, f, *res.witness};
      const auto v = verdicts(obj);
      if (emit.text()) {
        std::string s = shape_name + " q=" + std::to_string(q) + ":";
        for (auto x : *res.witness) s += " " + field_element_text(f, x);
        if (all_witnesses) s += "\ncount: " + std::to_string(res.count);
        emit(s + "\n");
      } else {
        emit(make_certificate(obj, v, extra));
      }
      return exit_for(verdicts_pass("tuple", v));
    }

    if (compose_cmd->parsed()) {
      const auto g = parse_group(group_text_arg);
      std::optional<Subgroup> unused;
      const auto fx = as_family(load_object(fx_file), unused);
      const auto fy = as_family(load_object(fy_file), unused);
      if (fy.group.order() % g.order() != 0) throw PreconditionError("|G| does not divide the order of F_Y's group");
      const auto f = make_field(fy.group.order() / g.order(), modulus);
      std::uint64_t rows = dm_rows;
      for (const auto& entry : fx.entries) rows = dm_rows ? rows : std::max(rows, entry.block.size());
      const auto fam = compose(g, fx, fy, field_dm(f, rows));
      const auto h = Subgroup::head(fam.group, fam.group.order() / g.order());
      const Object obj = fam;
      const auto v = verdicts(obj, h);
      if (emit.text()) {
        emit(family_to_text(fam));
      } else {
        emit(make_certificate(obj, v, {{"subgroup", subgroup_json(h)}}));
      }
      return exit_for(v.at("kind") == "relative DF" && v.at("resolvable").get<bool>());
    }

    if (develop_cmd->parsed()) {
      std::optional<Subgroup> h;
      const auto fam = as_family(load_object(input), h);
      if (auto given = parse_subgroup(fam.group, subgroup_text, head)) h = given;
      if (!h) throw PreconditionError("develop needs --subgroup or --head for a plain family");
      const Object obj = develop(pdf_from_rdf(fam, *h));
      const auto v = verdicts(obj);
      if (emit.text()) {
        emit(space_to_text(std::get<ResolvedSpace>(obj)));
      } else {
        emit(make_certificate(obj, v));
      }
      return exit_for(verdicts_pass("space", v));
    }

    if (verify->parsed()) {
      const auto content = read_file(input);
      const auto obj = parse_object(content);
      std::optional<json> cert;
      if (const auto t = content.find_first_not_of(" \t\r\n"); t != std::string::npos && content[t] == '{') {
        auto j = json::parse(content);
        if (j.value("kind", "") == "certificate") cert = std::move(j);
      }
      std::optional<Subgroup> h;
      if (const auto* f = std::get_if<BlockFamily>(&obj)) h = parse_subgroup(f->group, subgroup_text, head);
      if (!h && cert) h = subgroup_from_certificate(*cert, obj);
      const auto kind = object_kind(obj);
      const auto v = verdicts(obj, h);
      const auto d = digest(object_to_json(obj));
      bool pass = verdicts_pass(kind, v);
      json report{{"object_kind", kind}, {"digest", d}, {"verdicts", v}};
      if (cert) {
        const bool digest_ok = cert->value("digest", "") == d;
        const bool verdicts_ok = cert->at("verdicts") == v;
        report["certificate"] = {{"digest_matches", digest_ok}, {"verdicts_match", verdicts_ok}};
        pass = pass && digest_ok && verdicts_ok;
      }
      report["pass"] = pass;
      if (emit.text()) {
        std::string s = "kind: " + kind + "\ndigest: " + d + "\nverdicts: " + v.dump() + "\n";
        if (cert) {
          s += "certificate digest: " + std::string(report["certificate"]["digest_matches"].get<bool>() ? "match" : "MISMATCH") + "\n";
          s += "certificate verdicts: " + std::string(report["certificate"]["verdicts_match"].get<bool>() ? "match" : "MISMATCH") + "\n";
        }
        emit(s + (pass ? "PASS\n" : "FAIL\n"));
      } else {
        emit(report);
      }
      return exit_for(pass);
    }

    if (reproduce_cmd->parsed()) {
      ReproduceOptions ro;
      if (!data_dir.empty()) ro.data_dir = data_dir;
      ro.jobs = jobs;
      ro.quad_sweep_limit = quad_limit;
      const auto list = target == "all" ? reproduce_targets() : std::vector<std::string>{target};
      bool pass = true;
      json reports = json::array();
      std::string text;
      for (const auto& t : list) {
        const auto r = reproduce(t, ro);
        pass = pass && r.pass();
        reports.push_back(to_json(r));
        text += report_text(r);
      }
      if (emit.text(true)) {
        emit(text);
      } else {
        emit(reports);
      }
      return exit_for(pass);
    }

    if (pipeline->parsed()) {
      PipelineOptions po;
      po.strategy = parse_strategy(strategy, seed);
      po.seed = seed.value_or(0);
      po.jobs = jobs;
      po.greedy = greedy;
      po.max_nodes = max_nodes;
      if (!modulus.empty()) po.modulus = parse_modulus(modulus);
      const auto r = run_pipeline(parse_sizes(sizes), q, po);
      if (r.status == PipelineStatus::exhausted) {
        emit(json{{"status", "exhausted"}, {"route", r.route}, {"message", r.message}});
        return exit_exhausted;
      }
      if (!r.space) {
        emit(json{{"status", "mismatch"}, {"route", r.route}, {"message", r.message}});
        return exit_mismatch;
      }
      if (emit.text()) {
        emit(space_to_text(*r.space));
      } else {
        emit(r.certificate);
      }
      if (!r.message.empty()) err << r.message << "\n";
      return r.status == PipelineStatus::ok ? exit_ok : exit_mismatch;
    }

    if (qbound->parsed()) {
      const auto b = q_bound(e, n);
      if (emit.text(true)) {
        emit("Q(" + std::to_string(e) + "," + std::to_string(n) + ") = " + b.value().str(20) + "\nthreshold: " +
             b.threshold.str() + "\n");
      } else {
        emit(json{{"e", e},
                  {"n", n},
                  {"u", b.u.str()},
                  {"d", b.d.str()},
                  {"threshold", b.threshold.str()},
                  {"value", b.value().str(20)}});
      }
      return exit_ok;
    }
  } catch (const PreconditionError& ex) {
    err << "precondition: " << ex.what() << "\n";
    return exit_precondition;
  } catch (const ParseError& ex) {
    err << "parse error: " << ex.what() << "\n";
    return exit_precondition;
  } catch (const VerificationError& ex) {
    err << "verification failed: " << ex.what() << "\n";
    return exit_mismatch;
  } catch (const json::exception& ex) {
    err << "malformed JSON: " << ex.what() << "\n";
    return exit_precondition;
  }
  return exit_precondition;
}

}  // namespace harmony
