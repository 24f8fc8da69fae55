#include "demibit/netlist.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "demibit/errors.hpp"
#include "text_util.hpp"

namespace demibit {

namespace {

struct PendingGate {
  std::size_t line;
  std::string label;
  Op op;
  std::vector<std::string> refs;
};

std::size_t parse_count(std::string_view text, std::size_t line, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(line, "bad " + std::string(what) + " '" + std::string(text) + "'");
  return v;
}

Op parse_op(std::string_view text, std::size_t line) {
  const std::string up = detail::to_upper(text);
  if (up == "AND") return Op::And;
  if (up == "OR") return Op::Or;
  if (up == "NOT") return Op::Not;
  if (up == "XOR") return Op::Xor;
  if (up == "CONST0") return Op::Const0;
  if (up == "CONST1") return Op::Const1;
  throw ParseError(line, "unknown gate operation '" + std::string(text) + "'");
}

std::size_t arity(Op op) {
  switch (op) {
    case Op::Const0:
    case Op::Const1: return 0;
    case Op::Not: return 1;
    default: return 2;
  }
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  const auto lines = detail::logical_lines(text);
  if (lines.empty()) throw ParseError(1, "empty netlist");

  const auto& [header_line, header] = lines.front();
  const auto head = detail::split_ws(header);
  if (head.size() != 5 || head[0] != "circuit")
    throw ParseError(header_line, "expected 'circuit <name> in=<n> wit=<k> out=<refs>'");
  const std::string name = head[1];
  std::map<std::string, std::string> kv;
  for (std::size_t k = 2; k < head.size(); ++k) {
    const auto eq = head[k].find('=');
    if (eq == std::string::npos) throw ParseError(header_line, "expected key=value, got '" + head[k] + "'");
    kv[head[k].substr(0, eq)] = head[k].substr(eq + 1);
  }
  if (!kv.count("in") || !kv.count("wit") || !kv.count("out"))
    throw ParseError(header_line, "header needs in=, wit= and out=");
  const std::size_t n_std = parse_count(kv["in"], header_line, "input count");
  const std::size_t n_wit = parse_count(kv["wit"], header_line, "witness count");

  std::vector<PendingGate> pending;
  std::map<std::string, std::size_t> label_pos;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& [ln, body] = lines[k];
    const auto tok = detail::split_ws(body);
    if (tok.size() < 3 || tok[1] != "=")
      throw ParseError(ln, "expected 'g<j> = <OP> <ref> [<ref>]'");
    if (tok[0].size() < 2 || tok[0][0] != 'g')
      throw ParseError(ln, "gate label must look like g<j>, got '" + tok[0] + "'");
    parse_count(std::string_view(tok[0]).substr(1), ln, "gate label");
    if (label_pos.count(tok[0])) throw ParseError(ln, "duplicate gate label '" + tok[0] + "'");
    PendingGate g{ln, tok[0], parse_op(tok[2], ln), {tok.begin() + 3, tok.end()}};
    if (g.refs.size() != arity(g.op))
      throw ParseError(ln, std::string(to_string(g.op)) + " takes " + std::to_string(arity(g.op)) +
                               " operand(s)");
    label_pos[g.label] = pending.size();
    pending.push_back(std::move(g));
  }

  const std::size_t n_in = n_std + n_wit;
  // `user` is the index of the referring gate, or pending.size() for outputs.
  auto resolve = [&](const std::string& ref, std::size_t line, std::size_t user) -> Circuit::Node {
    if (ref.size() < 2) throw ParseError(line, "bad reference '" + ref + "'");
    const std::string_view num = std::string_view(ref).substr(1);
    switch (ref[0]) {
      case 'i': {
        const auto t = parse_count(num, line, "input reference");
        if (t < 1 || t > n_std) throw ParseError(line, "dangling operand reference '" + ref + "'");
        return static_cast<Circuit::Node>(t - 1);
      }
      case 'w': {
        const auto t = parse_count(num, line, "witness reference");
        if (t < 1 || t > n_wit) throw ParseError(line, "dangling operand reference '" + ref + "'");
        return static_cast<Circuit::Node>(n_std + t - 1);
      }
      case 'g': {
        parse_count(num, line, "gate reference");
        auto it = label_pos.find(ref);
        if (it == label_pos.end()) throw ParseError(line, "dangling operand reference '" + ref + "'");
        if (it->second >= user)
          throw ParseError(line, "cycle or forward reference: '" + ref + "' does not precede its use");
        return static_cast<Circuit::Node>(n_in + it->second);
      }
      default: throw ParseError(line, "bad reference '" + ref + "'");
    }
  };

  std::vector<Gate> gates;
  gates.reserve(pending.size());
  for (std::size_t k = 0; k < pending.size(); ++k) {
    const auto& p = pending[k];
    Gate g{p.op, 0, 0};
    if (!p.refs.empty()) g.a = resolve(p.refs[0], p.line, k);
    if (p.refs.size() > 1) g.b = resolve(p.refs[1], p.line, k);
    gates.push_back(g);
  }
  std::vector<Circuit::Node> outputs;
  for (const auto& ref : detail::split(kv["out"], ','))
    outputs.push_back(resolve(ref, header_line, pending.size()));
  if (outputs.empty()) throw ParseError(header_line, "no outputs");
  try {
    return Circuit(name, n_std, n_wit, std::move(gates), std::move(outputs));
  } catch (const ArityError& e) {
    throw ParseError(header_line, e.what());
  }
}

std::string to_netlist(const Circuit& c) {
  auto ref = [&](Circuit::Node v) {
    if (v < c.n_std()) return "i" + std::to_string(v + 1);
    if (v < c.n_inputs()) return "w" + std::to_string(v - c.n_std() + 1);
    return "g" + std::to_string(v - c.n_inputs() + 1);
  };
  std::ostringstream os;
  os << "circuit " << c.name() << " in=" << c.n_std() << " wit=" << c.n_wit() << " out=";
  for (std::size_t k = 0; k < c.outputs().size(); ++k) os << (k ? "," : "") << ref(c.outputs()[k]);
  os << '\n';
  for (std::size_t k = 0; k < c.gates().size(); ++k) {
    const Gate& g = c.gates()[k];
    os << 'g' << (k + 1) << " = " << to_string(g.op);
    if (arity(g.op) >= 1) os << ' ' << ref(g.a);
    if (arity(g.op) == 2) os << ' ' << ref(g.b);
    os << '\n';
  }
  return os.str();
}

}  // namespace demibit
