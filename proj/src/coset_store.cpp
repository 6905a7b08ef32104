#include "hecke/coset_store.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "hecke/error.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// CosetIndex

bool CosetIndex::same_coset(const GroupElement& g, const GroupElement& rep) const {
  // Hx = Hy iff x y^-1 in H; xH = yH iff x^-1 y in H.
  if (side_ == Side::Right) return group_->in_subgroup(mul(g, inv(rep)));
  return group_->in_subgroup(mul(inv(g), rep));
}

CosetIndex::Probe CosetIndex::probe(const GroupElement& g) const {
  Probe p;
  p.key = side_ == Side::Right ? group_->right_coset_key(g) : group_->right_coset_key(inv(g));
  auto it = buckets_.find(p.key);
  if (it == buckets_.end()) return p;
  for (auto id : it->second) {
    if (same_coset(g, reps_[id])) {
      p.id = id;
      break;
    }
  }
  return p;
}

std::uint32_t CosetIndex::insert(GroupElement rep, std::string key) {
  const auto id = static_cast<std::uint32_t>(reps_.size());
  reps_.push_back(std::move(rep));
  buckets_[std::move(key)].push_back(id);
  return id;
}

std::pair<std::uint32_t, bool> CosetIndex::intern(const GroupElement& g) {
  auto p = probe(g);
  if (p.id) return {*p.id, false};
  return {insert(g, std::move(p.key)), true};
}

// ---------------------------------------------------------------------------
// Orbits

namespace {

// BFS of the coset of g under H acting on the given side. Returns one
// representative per coset, the coset of g first.
std::vector<GroupElement> h_orbit(const HeckePair& pair, const GroupElement& g, CosetIndex::Side side,
                                  std::size_t max_orbit) {
  const auto hs = pair.symmetric_h_generators();
  CosetIndex seen(*pair.group, side);
  seen.intern(g);
  std::deque<std::uint32_t> queue{0};
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    for (const auto& h : hs) {
      auto y = side == CosetIndex::Side::Right ? mul(seen.rep(cur), h) : mul(h, seen.rep(cur));
      auto [id, fresh] = seen.intern(y);
      if (!fresh) continue;
      if (seen.size() > max_orbit)
        throw OrbitCapExceeded("H-orbit of " + render_element(g) + " exceeds max_orbit=" +
                               std::to_string(max_orbit));
      queue.push_back(id);
    }
  }
  return seen.reps();
}

}  // namespace

std::vector<GroupElement> right_orbit(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit) {
  return h_orbit(pair, g, CosetIndex::Side::Right, max_orbit);
}

std::vector<GroupElement> left_orbit(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit) {
  return h_orbit(pair, g, CosetIndex::Side::Left, max_orbit);
}

std::uint64_t left_L_count(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit) {
  return left_orbit(pair, g, max_orbit).size();
}

std::uint64_t right_R_count(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit) {
  return right_orbit(pair, g, max_orbit).size();
}

Rational relative_modular(const HeckePair& pair, const GroupElement& g, std::size_t max_orbit) {
  Rational delta(mpz_class(static_cast<unsigned long>(left_L_count(pair, g, max_orbit))),
                 mpz_class(static_cast<unsigned long>(right_R_count(pair, g, max_orbit))));
  delta.canonicalize();
  return delta;
}

UnimodularityReport unimodularity_check(const HeckePair& pair, std::size_t max_orbit) {
  UnimodularityReport report;
  const auto& tested = pair.finitely_generated ? pair.g_generators : pair.probes;
  for (const auto& s : tested) {
    auto delta = relative_modular(pair, s, max_orbit);
    if (delta != 1) report.witnesses.emplace_back(s, delta);
    report.values.emplace_back(s, std::move(delta));
  }
  report.verdict = report.witnesses.empty();
  report.decisive = pair.finitely_generated || !report.verdict;
  return report;
}

// ---------------------------------------------------------------------------
// CosetStore

CosetStore::CosetStore(std::shared_ptr<const HeckePair> pair, Caps caps)
    : pair_(std::move(pair)), caps_(caps), index_(*pair_->group, CosetIndex::Side::Right) {
  if (caps_.max_cosets == 0 || caps_.max_orbit == 0) throw DomainError("caps must be positive");
  edge_generators_ = pair_->symmetric_generators();
  const auto e = pair_->identity();
  auto key = pair_->group->right_coset_key(e);
  insert_coset(e, std::move(key), 0);
  right_H_orbit(base_coset());
  classes_[0].inverse = identity_class();
  classes_[0].word_length = 0;
}

void CosetStore::check_coset_cap(std::size_t extra) const {
  if (records_.size() + extra > caps_.max_cosets)
    throw CapExceeded("coset store exceeds max_cosets=" + std::to_string(caps_.max_cosets));
}

CosetId CosetStore::insert_coset(GroupElement rep, std::string key, std::optional<std::uint32_t> depth) {
  check_coset_cap(1);
  const auto id = index_.insert(std::move(rep), std::move(key));
  records_.push_back(CosetRecord{depth, std::nullopt});
  return CosetId{id};
}

CosetId CosetStore::intern_right_coset(const GroupElement& g) {
  if (sealed_) throw StoreSealed("cannot intern " + render_element(g) + " into a sealed store");
  auto p = index_.probe(g);
  if (p.id) return CosetId{*p.id};
  return insert_coset(g, std::move(p.key), std::nullopt);
}

std::optional<CosetId> CosetStore::find(const GroupElement& g) const {
  auto p = index_.probe(g);
  if (!p.id) return std::nullopt;
  return CosetId{*p.id};
}

std::optional<DoubleCosetId> CosetStore::find_class(const GroupElement& g) const {
  auto c = find(g);
  if (!c) return std::nullopt;
  return records_[c->value].dc;
}

DoubleCosetId CosetStore::right_H_orbit(CosetId c) {
  if (auto dc = records_.at(c.value).dc) return *dc;
  return build_class(index_.rep(c.value), c);
}

DoubleCosetId CosetStore::class_of(const GroupElement& g) {
  auto p = index_.probe(g);
  if (p.id) return right_H_orbit(CosetId{*p.id});
  return build_class(g, std::nullopt);
}

DoubleCosetId CosetStore::build_class(const GroupElement& seed, std::optional<CosetId> seed_id) {
  const auto hs = pair_->symmetric_h_generators();
  const auto& group = *pair_->group;

  // Orbit members are either cosets already in the store (without a class)
  // or pending cosets, committed only once the whole orbit and L are known.
  struct Member {
    bool pending;
    std::uint32_t id;
  };
  std::vector<Member> members;
  std::unordered_set<std::uint32_t> existing;
  CosetIndex pending(group, CosetIndex::Side::Right);
  std::vector<std::string> pending_keys;
  if (seed_id) {
    members.push_back({false, seed_id->value});
    existing.insert(seed_id->value);
  } else {
    auto key = group.right_coset_key(seed);
    members.push_back({true, pending.insert(seed, key)});
    pending_keys.push_back(std::move(key));
    check_coset_cap(1);
  }
  std::deque<GroupElement> queue{seed};

  while (!queue.empty()) {
    const auto x = std::move(queue.front());
    queue.pop_front();
    for (const auto& h : hs) {
      auto y = mul(x, h);
      auto p = index_.probe(y);
      if (p.id) {
        if (!existing.insert(*p.id).second) continue;
        if (records_[*p.id].dc)
          throw Error("coset " + std::to_string(*p.id) + " already belongs to another double coset");
        members.push_back({false, *p.id});
      } else {
        auto q = pending.probe(y);
        if (q.id) continue;
        members.push_back({true, pending.insert(y, q.key)});
        pending_keys.push_back(std::move(p.key));
      }
      if (members.size() > caps_.max_orbit)
        throw OrbitCapExceeded("right H-orbit of " + render_element(seed) + " exceeds max_orbit=" +
                               std::to_string(caps_.max_orbit));
      check_coset_cap(pending.size());
      queue.push_back(std::move(y));
    }
  }

  DoubleCosetRecord rec{seed, {}, {}, 0, 0, Rational(1), std::nullopt, std::nullopt};
  rec.left_reps = left_orbit(*pair_, seed, caps_.max_orbit);

  const DoubleCosetId d{static_cast<std::uint32_t>(classes_.size())};
  rec.members.reserve(members.size());
  for (const auto& m : members) {
    CosetId id{m.id};
    if (m.pending) {
      id = CosetId{index_.insert(pending.rep(m.id), std::move(pending_keys[m.id]))};
      records_.push_back(CosetRecord{std::nullopt, std::nullopt});
    }
    records_[id.value].dc = d;
    rec.members.push_back(id);
  }
  rec.R = rec.members.size();
  rec.L = rec.left_reps.size();
  rec.delta = Rational(mpz_class(static_cast<unsigned long>(rec.L)), mpz_class(static_cast<unsigned long>(rec.R)));
  rec.delta.canonicalize();
  classes_.push_back(std::move(rec));
  return d;
}

DoubleCosetId CosetStore::invert_double_coset(DoubleCosetId d) {
  if (auto inverse = classes_.at(d.value).inverse) return *inverse;
  const auto target = class_of(inv(classes_[d.value].rep));
  classes_[d.value].inverse = target;
  classes_[target.value].inverse = d;
  return target;
}

const std::vector<CosetId>& CosetStore::neighbors(CosetId c) const {
  static const std::vector<CosetId> empty;
  if (c.value >= adjacency_.size()) return empty;
  return adjacency_[c.value];
}

std::vector<CosetId> CosetStore::schreier_ball(std::uint32_t r) const {
  std::vector<CosetId> out;
  for (std::uint32_t i = 0; i < records_.size(); ++i)
    if (records_[i].depth && *records_[i].depth <= r) out.push_back(CosetId{i});
  return out;
}

std::vector<DoubleCosetId> CosetStore::class_ball(std::uint32_t r) const {
  std::vector<DoubleCosetId> out;
  for (std::uint32_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].word_length && *classes_[i].word_length <= r) out.push_back(DoubleCosetId{i});
  return out;
}

nlohmann::json CosetStore::snapshot() const {
  nlohmann::json cosets = nlohmann::json::array();
  for (std::uint32_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    cosets.push_back({{"id", i},
                      {"rep", render_element(index_.rep(i))},
                      {"wl", r.depth ? nlohmann::json(*r.depth) : nlohmann::json(nullptr)},
                      {"dc", r.dc ? nlohmann::json(r.dc->value) : nlohmann::json(nullptr)}});
  }
  nlohmann::json classes = nlohmann::json::array();
  for (std::uint32_t i = 0; i < classes_.size(); ++i) {
    const auto& d = classes_[i];
    classes.push_back({{"id", i},
                       {"rep", render_element(d.rep)},
                       {"R", d.R},
                       {"L", d.L},
                       {"delta", to_string(d.delta)},
                       {"inv", d.inverse ? nlohmann::json(d.inverse->value) : nlohmann::json(nullptr)},
                       {"l", d.word_length ? nlohmann::json(*d.word_length) : nlohmann::json(nullptr)}});
  }
  return {{"pair", pair_->label},
          {"radius", radius_ ? nlohmann::json(*radius_) : nlohmann::json(nullptr)},
          {"cosets", std::move(cosets)},
          {"double_cosets", std::move(classes)}};
}

// ---------------------------------------------------------------------------
// Ball enumeration

CosetStore enumerate_ball(std::shared_ptr<const HeckePair> pair, std::uint32_t r_max, Caps caps) {
  if (!pair->finitely_generated)
    throw NotFinitelyGenerated("pair '" + pair->label + "' has no finite generating set; ball enumeration disabled");
  CosetStore store(std::move(pair), caps);
  const auto& gens = store.edge_generators_;

  // Schreier BFS on H\G.
  std::vector<CosetId> frontier{CosetStore::base_coset()};
  for (std::uint32_t depth = 0; depth < r_max && !frontier.empty(); ++depth) {
    std::vector<CosetId> next;
    for (auto c : frontier) {
      std::vector<CosetId> nbrs;
      nbrs.reserve(gens.size());
      for (const auto& s : gens) {
        auto y = mul(store.rep(c), s);
        auto p = store.index_.probe(y);
        CosetId id;
        if (p.id) {
          id = CosetId{*p.id};
        } else {
          id = store.insert_coset(std::move(y), std::move(p.key), depth + 1);
          next.push_back(id);
        }
        nbrs.push_back(id);
      }
      if (store.adjacency_.size() <= c.value) store.adjacency_.resize(c.value + 1);
      store.adjacency_[c.value] = std::move(nbrs);
    }
    frontier = std::move(next);
  }

  // Class-level BFS: d' is adjacent to d when d' meets d S. Distances are the
  // word length for the generating set H S H of the pair.
  std::vector<DoubleCosetId> level{CosetStore::identity_class()};
  for (std::uint32_t k = 0; k < r_max && !level.empty(); ++k) {
    std::vector<DoubleCosetId> next;
    for (auto d : level) {
      const auto members = store.classes_[d.value].members;
      for (auto m : members) {
        for (const auto& s : gens) {
          const auto target = store.class_of(mul(store.rep(m), s));
          auto& rec = store.classes_[target.value];
          if (!rec.word_length) {
            rec.word_length = k + 1;
            next.push_back(target);
          }
        }
      }
    }
    level = std::move(next);
  }

  for (std::uint32_t i = 0; i < store.records_.size(); ++i)
    if (store.records_[i].depth && !store.records_[i].dc)
      throw Error("ball coset " + std::to_string(i) + " was not reached by the class-level BFS");

  const auto n = store.classes_.size();
  for (std::uint32_t i = 0; i < n; ++i) store.invert_double_coset(DoubleCosetId{i});

  store.radius_ = r_max;
  store.seal();
  return store;
}

CosetStore pointwise_store(std::shared_ptr<const HeckePair> pair, Caps caps) {
  CosetStore store(std::move(pair), caps);
  store.seal();
  return store;
}

HeckeReport verify_hecke(std::shared_ptr<const HeckePair> pair, std::uint32_t depth, Caps caps) {
  HeckeReport report;
  report.depth = depth;
  try {
    const auto store = enumerate_ball(std::move(pair), depth, caps);
    for (std::uint32_t i = 0; i < store.class_count(); ++i) {
      const auto& d = store.double_coset(DoubleCosetId{i});
      report.max_L = std::max(report.max_L, d.L);
      report.max_R = std::max(report.max_R, d.R);
    }
    report.classes = store.class_count();
    report.verdict = HeckeReport::Verdict::Hecke;
  } catch (const CapExceeded& e) {
    report.verdict = HeckeReport::Verdict::Inconclusive;
    report.reason = e.what();
  } catch (const NotFinitelyGenerated& e) {
    report.verdict = HeckeReport::Verdict::Inconclusive;
    report.reason = e.what();
  }
  return report;
}

}  // namespace hecke
