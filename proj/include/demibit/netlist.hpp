#pragma once

#include <string>
#include <string_view>

#include "demibit/circuit.hpp"

namespace demibit {

/// Parses the line-oriented netlist format:
///
///     circuit <name> in=<n> wit=<k> out=<ref>[,<ref>...]
///     g<j> = <OP> <ref> [<ref>]
///
/// where <ref> is i<t> (standard input t), w<t> (witness input t) or g<j>,
/// and '#' starts a comment. Throws ParseError with the offending line.
Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit; gates are written as g1, g2, ... in order.
std::string to_netlist(const Circuit& c);

}  // namespace demibit
