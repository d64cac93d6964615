#include "harmony/spaces.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>

#include "harmony/errors.hpp"

namespace harmony {

BlockFamily ParallelClassPdf::family() const {
  BlockFamily f{group, {}};
  for (const auto& b : blocks) f.entries.push_back({b, 1});
  return f;
}

ParallelClassPdf pdf_from_rdf(const BlockFamily& f, const Subgroup& h) {
  const auto v = classify(f, h);
  if (v.kind != FamilyKind::relative || v.lambda != 1 || !v.resolvable || !(v.subgroup == h)) {
    throw PreconditionError("family is not a resolvable relative DF with index 1 over the given subgroup");
  }
  ParallelClassPdf p{f.group, h, h.order(), {}, h.order() == 1};
  for (auto x : h.elements()) {
    for (const auto& b : f.blocks()) p.blocks.push_back(b.translated(f.group, x));
  }
  p.blocks.push_back(Block::of(h.elements()));
  const auto check = classify(p.family());
  if (check.kind != FamilyKind::partitioned || check.lambda != h.order()) {
    throw VerificationError("developed base class is not a PDF with index |H|");
  }
  return p;
}

// ---------------------------------------------------------------------------

ResolvedSpace::ResolvedSpace(AbelianGroup group, const std::vector<std::vector<std::vector<Index>>>& classes)
    : group_(std::move(group)) {
  if (group_.order() > std::numeric_limits<std::uint32_t>::max()) throw PreconditionError("too many points");
  for (const auto& cls : classes) {
    std::vector<std::vector<std::uint32_t>> blocks;
    for (const auto& b : cls) {
      if (b.empty()) throw PreconditionError("empty block");
      std::vector<std::uint32_t> pts;
      for (auto x : b) {
        if (x >= group_.order()) throw PreconditionError("point " + std::to_string(x) + " outside the group");
        pts.push_back(static_cast<std::uint32_t>(x));
      }
      std::sort(pts.begin(), pts.end());
      blocks.push_back(std::move(pts));
    }
    std::sort(blocks.begin(), blocks.end());
    for (const auto& b : blocks) {
      points_.insert(points_.end(), b.begin(), b.end());
      block_start_.push_back(points_.size());
    }
    class_start_.push_back(block_start_.size() - 1);
  }
}

std::span<const std::uint32_t> ResolvedSpace::block(std::size_t b) const {
  return {points_.data() + block_start_[b], block_start_[b + 1] - block_start_[b]};
}

std::vector<std::vector<std::vector<Index>>> ResolvedSpace::classes() const {
  std::vector<std::vector<std::vector<Index>>> out(class_count());
  for (std::size_t c = 0; c < class_count(); ++c) {
    for (auto b = class_start_[c]; b < class_start_[c + 1]; ++b) {
      const auto pts = block(b);
      out[c].emplace_back(pts.begin(), pts.end());
    }
  }
  return out;
}

std::vector<Index> partition_stabilizer(const AbelianGroup& g, const std::vector<Block>& blocks) {
  const auto v = g.order();
  std::vector<std::int64_t> label(v, -1);
  std::vector<std::vector<Index>> elems;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    elems.push_back(blocks[i].elements());
    for (auto x : elems.back()) {
      if (label[x] >= 0) throw PreconditionError("blocks do not partition the group");
      label[x] = static_cast<std::int64_t>(i);
    }
  }
  for (auto l : label) {
    if (l < 0) throw PreconditionError("blocks do not partition the group");
  }
  std::vector<Index> out;
  for (Index t = 0; t < v; ++t) {
    bool fixed = true;
    for (std::size_t i = 0; i < elems.size() && fixed; ++i) {
      const auto l = label[g.add(elems[i][0], t)];
      fixed = elems[static_cast<std::size_t>(l)].size() == elems[i].size();
      for (std::size_t j = 1; j < elems[i].size() && fixed; ++j) fixed = label[g.add(elems[i][j], t)] == l;
    }
    if (fixed) out.push_back(t);
  }
  return out;
}

ResolvedSpace develop(const ParallelClassPdf& p) {
  const auto& g = p.group;
  if (partition_stabilizer(g, p.blocks) != p.subgroup.elements()) {
    throw VerificationError("stabilizer of the base class differs from H");
  }
  std::vector<std::vector<std::vector<Index>>> classes;
  for (Index x = 0; x < g.order(); ++x) {
    bool minimal = true;
    for (auto h : p.subgroup.elements()) minimal = minimal && g.add(x, h) >= x;
    if (!minimal) continue;
    auto& cls = classes.emplace_back();
    for (const auto& b : p.blocks) cls.push_back(b.translated(g, x).elements());
  }
  return ResolvedSpace(g, classes);
}

std::map<std::uint64_t, std::uint64_t> count_blocks(const ResolvedSpace& s) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (std::size_t b = 0; b < s.block_count(); ++b) ++out[s.block(b).size()];
  return out;
}

// ---------------------------------------------------------------------------

std::set<std::uint64_t> SpaceCertificate::sizes() const {
  std::set<std::uint64_t> out;
  for (const auto& [k, n] : counts) out.insert(k);
  return out;
}

SpaceCertificate verify_space(const ResolvedSpace& s, const SpaceCheckOptions& options) {
  SpaceCertificate cert;
  const auto v = s.v();
  cert.v = v;
  cert.classes = s.class_count();
  cert.counts = count_blocks(s);
  auto note = [&](std::string why) {
    if (cert.defect.empty()) cert.defect = std::move(why);
  };

  cert.resolved = true;
  std::vector<std::size_t> stamp(v, 0);
  for (std::size_t c = 0; c < s.class_count(); ++c) {
    const auto [first, last] = s.class_blocks(c);
    std::uint64_t covered = 0;
    for (auto b = first; b < last; ++b) {
      for (auto x : s.block(b)) {
        if (stamp[x] == c + 1) {
          cert.resolved = false;
          note("class " + std::to_string(c) + " covers point " + std::to_string(x) + " twice");
        }
        stamp[x] = c + 1;
        ++covered;
      }
    }
    if (covered != v) {
      cert.resolved = false;
      note("class " + std::to_string(c) + " does not partition the points");
    }
  }

  bool repeated = false;
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    const auto pts = s.block(b);
    repeated = repeated || std::adjacent_find(pts.begin(), pts.end()) != pts.end();
  }
  if (repeated) {
    note("a block repeats a point");
    return cert;
  }

  if (v <= options.exhaustive_limit) {
    cert.exhaustive = true;
    // pair {i < j} at j(j-1)/2 + i, saturating count
    std::vector<std::uint8_t> seen(v * (v - 1) / 2, 0);
    for (std::size_t b = 0; b < s.block_count(); ++b) {
      const auto pts = s.block(b);
      for (std::size_t j = 1; j < pts.size(); ++j) {
        const auto base = static_cast<std::uint64_t>(pts[j]) * (pts[j] - 1) / 2;
        for (std::size_t i = 0; i < j; ++i) {
          auto& c = seen[base + pts[i]];
          if (c < 2) ++c;
        }
      }
    }
    cert.pairs_checked = seen.size();
    const auto bad = std::find_if(seen.begin(), seen.end(), [](std::uint8_t c) { return c != 1; });
    cert.linear = bad == seen.end();
    if (!cert.linear) note(*bad == 0 ? "a pair of points lies in no block" : "a pair of points lies in two blocks");
    return cert;
  }

  // sampled: exact pair count plus random pairs through the incidence lists
  std::uint64_t pairs = 0;
  std::vector<std::vector<std::uint32_t>> incidence(v);
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    const auto pts = s.block(b);
    pairs += pts.size() * (pts.size() - 1) / 2;
    for (auto x : pts) incidence[x].push_back(static_cast<std::uint32_t>(b));
  }
  cert.linear = pairs == v * (v - 1) / 2;
  if (!cert.linear) note("block pair count differs from v(v-1)/2");
  std::mt19937_64 rng(options.seed);
  for (std::uint64_t n = 0; n < options.sample_pairs && cert.linear; ++n) {
    const auto x = rng() % v;
    auto y = rng() % (v - 1);
    if (y >= x) ++y;
    const auto& a = incidence[x];
    const auto& b = incidence[y];
    std::uint64_t common = 0;
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
      if (a[i] < b[j]) {
        ++i;
      } else if (b[j] < a[i]) {
        ++j;
      } else {
        ++common, ++i, ++j;
      }
    }
    if (common != 1) {
      cert.linear = false;
      note("pair {" + std::to_string(x) + ", " + std::to_string(y) + "} lies in " + std::to_string(common) + " blocks");
    }
    ++cert.pairs_checked;
  }
  return cert;
}

bool pair_coverage_check(const ResolvedSpace& s) { return verify_space(s).linear; }

// ---------------------------------------------------------------------------

std::vector<Index> standard_generators(const AbelianGroup& g) {
  std::vector<Index> out;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    std::vector<std::int64_t> unit(g.rank(), 0);
    unit[i] = 1;
    if (g.factors()[i] > 1) out.push_back(g.index_of({unit}));
  }
  return out;
}

HarmonyCertificate verify_harmonious(const ResolvedSpace& s, const AbelianGroup& group,
                                     const std::vector<Index>& generators) {
  if (group.order() != s.v()) {
    throw PreconditionError("acting group has order " + std::to_string(group.order()) + " but the space has " +
                            std::to_string(s.v()) + " points");
  }
  if (!(group == s.group())) throw PreconditionError("acting group is not the point group of the space");
  for (auto t : generators) {
    if (t >= group.order()) throw PreconditionError("generator outside the group");
  }
  HarmonyCertificate cert;
  auto note = [&](std::string why) {
    if (cert.defect.empty()) cert.defect = std::move(why);
  };
  const auto v = s.v();
  const auto acting = generated_subgroup(group, generators);
  cert.acting_order = acting.size();

  // translations act freely, so regular = transitive = the whole group
  cert.point_regular = acting.size() == v;
  if (!cert.point_regular) note("acting group is not transitive on the points");

  // block lookup by its two smallest points
  std::vector<std::size_t> class_of(s.block_count());
  for (std::size_t c = 0; c < s.class_count(); ++c) {
    const auto [first, last] = s.class_blocks(c);
    for (auto b = first; b < last; ++b) class_of[b] = c;
  }
  auto key = [v](const std::vector<std::uint32_t>& pts) {
    return static_cast<std::uint64_t>(pts[0]) * v + (pts.size() > 1 ? pts[1] : pts[0]);
  };
  std::vector<std::pair<std::uint64_t, std::size_t>> keys;
  for (std::size_t b = 0; b < s.block_count(); ++b) {
    const auto pts = s.block(b);
    keys.push_back({key({pts.begin(), pts.end()}), b});
  }
  std::sort(keys.begin(), keys.end());
  auto find_block = [&](const std::vector<std::uint32_t>& pts) -> std::optional<std::size_t> {
    auto [lo, hi] = std::equal_range(keys.begin(), keys.end(), std::pair{key(pts), std::size_t{0}},
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = lo; it != hi; ++it) {
      const auto cand = s.block(it->second);
      if (std::equal(cand.begin(), cand.end(), pts.begin(), pts.end())) return it->second;
    }
    return std::nullopt;
  };

  cert.preserves_resolution = true;
  std::vector<std::uint32_t> pts;
  for (auto t : generators) {
    std::vector<std::uint32_t> shift(v);
    for (Index x = 0; x < v; ++x) shift[x] = static_cast<std::uint32_t>(group.add(x, t));
    std::vector<std::size_t> map(s.class_count(), s.class_count());
    for (std::size_t b = 0; b < s.block_count() && cert.preserves_resolution; ++b) {
      pts.clear();
      for (auto x : s.block(b)) pts.push_back(shift[x]);
      std::sort(pts.begin(), pts.end());
      const auto image = find_block(pts);
      if (!image) {
        cert.preserves_resolution = false;
        note("a translate of block " + std::to_string(b) + " is not a block");
        break;
      }
      auto& m = map[class_of[b]];
      if (m == s.class_count()) m = class_of[*image];
      if (m != class_of[*image]) {
        cert.preserves_resolution = false;
        note("a translation splits class " + std::to_string(class_of[b]));
      }
    }
    if (cert.preserves_resolution) {
      std::vector<bool> hit(s.class_count(), false);
      for (auto m : map) {
        if (m >= s.class_count() || hit[m]) {
          cert.preserves_resolution = false;
          note("a translation does not permute the classes");
          break;
        }
        hit[m] = true;
      }
    }
    cert.class_maps.push_back(std::move(map));
    if (!cert.preserves_resolution) break;
  }
  if (!cert.preserves_resolution || s.class_count() == 0) return cert;

  // orbit of class 0
  std::vector<bool> reached(s.class_count(), false);
  std::deque<std::size_t> queue{0};
  reached[0] = true;
  std::size_t orbit = 1;
  while (!queue.empty()) {
    const auto c = queue.front();
    queue.pop_front();
    for (const auto& m : cert.class_maps) {
      if (!reached[m[c]]) {
        reached[m[c]] = true;
        ++orbit;
        queue.push_back(m[c]);
      }
    }
  }
  cert.class_transitive = orbit == s.class_count();
  if (!cert.class_transitive) note("classes form more than one orbit");

  // stabilizer of class 0, through the partition labels of class 0
  const auto [first, last] = s.class_blocks(0);
  std::vector<std::int64_t> label(v, -1);
  bool partition = true;
  for (auto b = first; b < last; ++b) {
    for (auto x : s.block(b)) {
      partition = partition && label[x] < 0;
      label[x] = static_cast<std::int64_t>(b);
    }
  }
  if (!partition || std::find(label.begin(), label.end(), -1) != label.end()) {
    note("class 0 is not a partition; stabilizer not computed");
    return cert;
  }
  for (auto t : acting) {
    bool fixed = true;
    for (auto b = first; b < last && fixed; ++b) {
      const auto blk = s.block(b);
      const auto l = label[group.add(blk[0], t)];
      fixed = s.block(static_cast<std::size_t>(l)).size() == blk.size();
      for (std::size_t j = 1; j < blk.size() && fixed; ++j) fixed = label[group.add(blk[j], t)] == l;
    }
    if (fixed) cert.stabilizer.push_back(t);
  }
  if (cert.class_transitive && cert.stabilizer.size() * s.class_count() != acting.size()) {
    note("orbit-stabilizer count does not balance");
    cert.class_transitive = false;
  }
  return cert;
}

}  // namespace harmony
