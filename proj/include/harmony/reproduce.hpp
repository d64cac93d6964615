#pragma once

// Reproduction targets that rebuild the worked examples and witness tables
// and diff them against the expected values in the data directory, and the
// end-to-end pipeline from a size set K and a prime power q to a verified
// harmonious space.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "harmony/io.hpp"

namespace harmony {

/// $HARMONY_DATA_DIR when set, else the source tree's data/ directory.
std::filesystem::path default_data_dir();

/// Witness table: one row per q, optional modulus, tuple entries as text.
struct TupleTable {
  struct Row {
    std::uint64_t q = 0;
    std::optional<std::vector<std::uint32_t>> modulus;
    std::vector<std::string> tuple;
  };
  std::string shape;
  std::vector<Row> rows;
  std::vector<std::uint64_t> none;  // q with no witness
};
TupleTable parse_tuple_table(std::string_view text);
/// The row's field and its parsed tuple.
FiniteField row_field(const TupleTable::Row& row);
std::vector<FieldElement> row_tuple(const FiniteField& f, const TupleTable::Row& row);

/// key=value fields of one line of examples.txt (z8, z34, z57).
std::map<std::string, std::string> example_entry(const std::filesystem::path& data_dir, const std::string& name);

struct ReportItem {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string target;
  std::vector<ReportItem> items;
  double seconds = 0;

  bool pass() const;
  void add(std::string name, bool pass, std::string detail = {});
};

struct ReproduceOptions {
  std::filesystem::path data_dir = default_data_dir();
  unsigned jobs = 1;
  /// Upper end of the fresh quadruple search sweep.
  std::uint64_t quad_sweep_limit = 1000;
};

std::vector<std::string> reproduce_targets();
/// Throws PreconditionError for an unknown target or unreadable data.
Report reproduce(const std::string& target, const ReproduceOptions& options = {});

json to_json(const Report& r);
std::string report_text(const Report& r);

// ---------------------------------------------------------------------------

struct PipelineOptions {
  Strategy strategy = Strategy::lex;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool greedy = false;
  std::uint64_t max_nodes = 0;
  std::optional<std::vector<std::uint32_t>> modulus;
};

enum class PipelineStatus { ok, mismatch, exhausted };

struct PipelineResult {
  PipelineStatus status = PipelineStatus::exhausted;
  /// quad, quad17, quint, sept, or generic.
  std::string route;
  BlockFamily sdf;
  std::optional<std::vector<FieldElement>> witness;
  std::optional<Lifting> lifting;
  std::optional<ResolvedSpace> space;
  std::string message;
  json certificate;
};

/// K = {2,4} with q = 1 mod 8 takes the quadruple route (quad17 at q = 17),
/// K = {3,6} with q = 19 mod 36 the quintuple route, K = {3,4,5,6} with
/// q = 1 mod 14 the septuple route; everything else assembles an SDF over
/// Z_{min K} and lifts it by backtracking. Throws PreconditionError when K or
/// q is invalid, naming the residue class q must lie in.
PipelineResult run_pipeline(const std::set<std::uint64_t>& k, std::uint64_t q, const PipelineOptions& options = {});

}  // namespace harmony
