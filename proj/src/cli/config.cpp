#include <fstream>
#include <sstream>

#include "demibit/cli.hpp"
#include "demibit/errors.hpp"
#include "text_util.hpp"

namespace demibit::cli {

namespace {

std::uint64_t parse_u64(const std::string& s, std::size_t line, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, std::string(what) + " must be a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError(line, std::string(what) + " out of range: '" + s + "'");
  }
}

}  // namespace

int worse(int a, int b) {
  auto rank = [](int code) {
    switch (code) {
      case kExitViolation: return 3;
      case kExitCap: return 2;
      case kExitInput: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  bool seen_seed = false, seen_cap = false;
  for (const auto& [line, content] : detail::logical_lines(text)) {
    const auto words = detail::split_ws(content);
    const std::string& key = words[0];
    auto single = [&, line = line]() -> const std::string& {
      if (words.size() != 2) throw ParseError(line, "'" + key + "' takes exactly one value");
      return words[1];
    };
    if (key == "seed") {
      if (seen_seed) throw ParseError(line, "duplicate 'seed'");
      seen_seed = true;
      cfg.seed = parse_u64(single(), line, "seed");
    } else if (key == "cap") {
      if (seen_cap) throw ParseError(line, "duplicate 'cap'");
      seen_cap = true;
      cfg.cap = static_cast<std::size_t>(parse_u64(single(), line, "cap"));
      if (cfg.cap == 0 || cfg.cap > 40) throw ParseError(line, "cap must lie in 1..40");
    } else if (key == "output") {
      if (cfg.output) throw ParseError(line, "duplicate 'output'");
      cfg.output = single();
    } else if (key == "input") {
      cfg.inputs.push_back(single());
    } else if (key == "task") {
      if (words.size() < 2) throw ParseError(line, "'task' needs a kind");
      TaskSpec t;
      t.kind = words[1];
      t.line = line;
      for (std::size_t k = 2; k < words.size(); ++k) {
        const auto eq = words[k].find('=');
        if (eq == std::string::npos || eq == 0)
          throw ParseError(line, "task parameter '" + words[k] + "' is not key=value");
        const std::string name = words[k].substr(0, eq);
        if (!t.params.emplace(name, words[k].substr(eq + 1)).second)
          throw ParseError(line, "duplicate task parameter '" + name + "'");
      }
      cfg.tasks.push_back(std::move(t));
    } else {
      throw ParseError(line, "unknown config directive '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace demibit::cli
