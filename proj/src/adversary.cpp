#include "advnet/adversary.hpp"

#include <algorithm>

#include "advnet/errors.hpp"

namespace advnet::adv {

namespace {

const std::vector<std::pair<std::string, Strategy::Kind>> kNames = {
    {"silent", Strategy::Kind::Silent},
    {"erase", Strategy::Kind::EraseZeros},
    {"random", Strategy::Kind::RandomNoise},
    {"forge-payload", Strategy::Kind::ForgePayload},
    {"forge-own-hash", Strategy::Kind::ForgeOwnHash},
    {"forge-foreign-hash", Strategy::Kind::ForgeForeignHash},
    {"symmetrize", Strategy::Kind::Symmetrize},
};

gf::Element sample_nonzero(Rng& rng, const gf::FieldRef& field) {
  for (;;) {
    gf::Element e = field->sample(rng);
    if (!e.is_zero()) return e;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

Strategy Strategy::parse(const std::string& name) {
  for (const auto& [label, kind] : kNames)
    if (label == name) return Strategy{kind};
  throw UsageError("unknown strategy: " + name);
}

const std::vector<std::string>& Strategy::names() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v;
    for (const auto& [label, kind] : kNames) v.push_back(label);
    return v;
  }();
  return all;
}

std::string Strategy::name() const {
  for (const auto& [label, k] : kNames)
    if (k == kind) return label;
  throw UsageError("unnamed strategy");
}

code::Packet corrupt(const Strategy& strategy, const AttackContext& ctx,
                     const std::string& edge_id, const code::Packet& honest) {
  require(ctx.net != nullptr && ctx.params != nullptr && ctx.rng != nullptr,
          "attack context is incomplete");
  const code::CodeParams& p = *ctx.params;
  const gf::FieldRef& field = p.field;
  Rng& rng = *ctx.rng;

  switch (strategy.kind) {
    case Strategy::Kind::Silent:
      return honest;

    case Strategy::Kind::EraseZeros: {
      code::Packet out = code::null_packet(p);
      if (honest.h.empty()) out.h.clear();
      return out;
    }

    case Strategy::Kind::RandomNoise: {
      code::Packet out = honest;
      for (uint32_t l = 0; l < p.n; ++l) out.w[l] = field->sample(rng);
      return out;
    }

    case Strategy::Kind::ForgePayload: {
      code::Packet out = honest;
      const uint64_t pos = rng.below(p.n);
      out.w[pos] += sample_nonzero(rng, field);
      return out;
    }

    case Strategy::Kind::ForgeOwnHash: {
      code::Packet out = honest;
      if (out.h.empty()) return out;  // nothing to forge without check blocks
      const size_t rr = static_cast<size_t>(p.r) * p.r;
      const size_t base = p.node_index(ctx.net->edge(edge_id).tail) * rr;
      out.h[base + rng.below(rr)] += sample_nonzero(rng, field);
      return out;
    }

    case Strategy::Kind::ForgeForeignHash: {
      code::Packet out = honest;
      if (out.h.empty()) return out;
      const size_t rr = static_cast<size_t>(p.r) * p.r;
      const size_t base = p.node_index(ctx.net->edge(edge_id).head) * rr;
      out.h[base + rng.below(rr)] += sample_nonzero(rng, field);
      return out;
    }

    case Strategy::Kind::Symmetrize: {
      require(ctx.alt_traffic != nullptr,
              "symmetrize needs a reference run of the alternative message");
      const auto it = ctx.alt_traffic->find(edge_id);
      require(it != ctx.alt_traffic->end(),
              "symmetrize reference run is missing a controlled edge");
      code::Packet out;
      out.w = it->second.w;  // the alternative content for this edge
      out.h = honest.h;      // check symbols cannot be recomputed
      return out;
    }
  }
  throw UsageError("unnamed strategy");
}

}  // namespace advnet::adv
