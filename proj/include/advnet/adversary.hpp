#pragma once

// Attack strategies for the jamming adversary.  A strategy decides, per
// controlled edge, what packet actually travels the wire in place of the
// honest emission.  Strategies may draw randomness, read any traffic that
// has already been transmitted, and read the secret bundles of controlled
// nodes — but never the secrets of honest nodes.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "advnet/rng.hpp"
#include "advnet/secretcode.hpp"
#include "advnet/topology.hpp"

namespace advnet::adv {

struct Strategy {
  enum class Kind {
    Silent,            // transmit the honest packet unchanged
    EraseZeros,        // replace the packet with an all-zero (null) packet
    RandomNoise,       // redraw every payload symbol uniformly at random
    ForgePayload,      // add a nonzero delta to one payload symbol
    ForgeOwnHash,      // add a nonzero delta inside the sender's own
                       // check-symbol block (no downstream node reads it)
    ForgeForeignHash,  // add a nonzero delta inside the receiving node's
                       // check-symbol block (forces rejection of a
                       // correct packet)
    Symmetrize,        // splice the payload a clean run of the alternative
                       // message would have put on this edge, keeping the
                       // honest check symbols
  };

  Kind kind = Kind::Silent;

  // Maps "silent", "erase", "random", "forge-payload", "forge-own-hash",
  // "forge-foreign-hash", "symmetrize" to a strategy; throws UsageError
  // for anything else.
  static Strategy parse(const std::string& name);
  static const std::vector<std::string>& names();
  std::string name() const;

  bool operator==(const Strategy&) const = default;
};

// Everything a strategy is allowed to look at when corrupting one edge.
struct AttackContext {
  const topo::Network* net = nullptr;
  const code::CodeParams* params = nullptr;

  // Packets already on the wire when the transmitting node started its
  // emissions (the adversary cannot see into the future of the schedule).
  const std::map<std::string, code::Packet>* traffic = nullptr;

  // Secret bundles of controlled nodes only (empty for edge adversaries).
  const std::map<std::string, code::SecretBundle>* controlled_secrets =
      nullptr;

  // For Symmetrize: the packet a clean, adversary-free run of the
  // alternative message would transmit on each edge, mixed with the same
  // coefficient streams as the real run.
  const std::map<std::string, code::Packet>* alt_traffic = nullptr;

  Rng* rng = nullptr;
};

// Returns the packet the adversary places on `edge_id` given the honest
// emission.  Deterministic given the context RNG state.  Throws
// ConfigError when the strategy needs context that is missing (e.g.
// Symmetrize without alternative traffic).
code::Packet corrupt(const Strategy& strategy, const AttackContext& ctx,
                     const std::string& edge_id, const code::Packet& honest);

}  // namespace advnet::adv
