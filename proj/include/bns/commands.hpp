#pragma once

#include "bns/run_config.hpp"

#include <string>

namespace bns {

// CSV outputs of the CLI commands (header row, comma separators, LF line
// endings, floats at round-trip precision). Byte-stable for a fixed
// config and seed, independent of the thread count.

std::string cmd_price(const RunConfig& cfg);
std::string cmd_sweep(const RunConfig& cfg, const std::string& axis);
std::string cmd_bound(const RunConfig& cfg);

// Quick internal consistency checks; returns true when everything passed
// and prints one line per check to the given stream.
bool run_selftest(std::string& report);

} // namespace bns
