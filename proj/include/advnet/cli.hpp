#pragma once

// Command-line front end.  Subcommands:
//   mincut           min-cut values, optionally after deleting edges
//   rate             residual rate under an adversary, plus suggested
//                    code parameters for a target slack
//   run              Monte-Carlo sweep over adversary sets x strategies
//   demo-symmetrize  two-sided confoundment experiment from a scenario file
//
// Exit codes: 0 success, 1 a simulated quantity violated its bound (or a
// demo failed to show its effect), 2 bad usage or malformed input.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "advnet/topology.hpp"

namespace advnet::cli {

// A self-contained confoundment experiment: a network, two edge sets that
// jointly cover the destination's in-edges, two messages, and code sizes.
//
//   node/edge lines    as in network files
//   a1 <edge ids...>   first controlled set
//   a2 <edge ids...>   second controlled set
//   param n <int>      message block length
//   param m <int>      field degree
//   param p <int>      field characteristic (optional, default 2)
//   w1 <hex bytes>     first message
//   w2 <hex bytes>     second message
struct Scenario {
  topo::Network net;
  std::vector<std::string> set_a;
  std::vector<std::string> set_b;
  std::vector<uint8_t> message_a;
  std::vector<uint8_t> message_b;
  uint32_t n = 0;
  uint32_t m = 0;
  uint32_t p = 2;
};

Scenario load_scenario(std::istream& in, const std::string& name);
Scenario load_scenario_file(const std::string& path);

// Runs the tool; never throws.  `out` receives results, `err` receives
// warnings and error messages.  The ADVNET_SEED environment variable
// supplies the master seed when --seed is not given.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace advnet::cli
