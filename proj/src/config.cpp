#include "lrf/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace lrf {

namespace {

struct Token {
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::string cur;
  int cur_line = 1, cur_col = 1;
  auto flush = [&]() {
    if (!cur.empty()) {
      out.push_back({cur, cur_line, cur_col});
      cur.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '#') {
      flush();
      while (i < text.size() && text[i] != '\n') ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == '\n') {
      flush();
      ++line;
      col = 1;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ';' || c == ',') {
      flush();
      ++col;
      continue;
    }
    if (c == '{' || c == '}' || c == '(' || c == ')') {
      flush();
      out.push_back({std::string(1, c), line, col});
      ++col;
      continue;
    }
    if (cur.empty()) {
      cur_line = line;
      cur_col = col;
    }
    cur += c;
    ++col;
  }
  flush();
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  bool done() const { return pos_ >= toks_.size(); }
  const Token& peek() const {
    if (done()) throw ConfigError("unexpected end of input", last_line(), 1);
    return toks_[pos_];
  }
  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& s) {
    Token t = next();
    if (t.text != s) throw ConfigError("expected '" + s + "', got '" + t.text + "'", t.line, t.col);
  }
  double number() {
    Token t = next();
    try {
      std::size_t used = 0;
      double v = std::stod(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument(t.text);
      return v;
    } catch (...) {
      throw ConfigError("expected a number, got '" + t.text + "'", t.line, t.col);
    }
  }
  long integer() {
    Token t = peek();
    double v = number();
    if (v != std::floor(v)) throw ConfigError("expected an integer, got '" + t.text + "'", t.line, t.col);
    return long(v);
  }
  int last_line() const { return toks_.empty() ? 1 : toks_.back().line; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

struct RawTerm {
  Complex coef;
  std::vector<KernelOp> ops;
  int line = 1;
};

struct RawChannel {
  int gamma = -1;
  double weight = 1;
  bool gamma_seen = false;
  std::vector<RawTerm> terms, primes;
};

struct RawConfig {
  std::optional<int> dim, spins, side;
  std::optional<double> beta;
  std::vector<RawTerm> local;
  std::vector<RawChannel> channels;
  std::optional<std::string> preset;
  std::map<std::string, double> preset_params;
};

int parse_spin(Parser& p, int spins) {
  Token t = p.next();
  if (t.text == "u") return 0;
  if (t.text == "d") return spins > 1 ? 1 : 0;
  try {
    int s = std::stoi(t.text);
    if (s < 0 || s >= spins) throw ConfigError("spin index out of range", t.line, t.col);
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError("expected a spin label, got '" + t.text + "'", t.line, t.col);
  }
}

RawTerm parse_term(Parser& p, int dim, int spins) {
  RawTerm term;
  term.line = p.peek().line;
  double re = p.number();
  double im = p.number();
  term.coef = Complex(re, im);
  while (!p.done()) {
    std::string tx = p.peek().text;
    if (tx == "term" || tx == "prime" || tx == "}" || tx == "gamma" || tx == "weight") break;
    bool paren = false;
    if (tx == "(") {
      p.next();
      paren = true;
    }
    Token nu = p.next();
    if (nu.text != "+" && nu.text != "-")
      throw ConfigError("expected '+' or '-' dagger flag, got '" + nu.text + "'", nu.line, nu.col);
    int spin = parse_spin(p, spins);
    Offset off{0, 0, 0};
    for (int i = 0; i < dim; ++i) off[i] = int(p.integer());
    if (paren) p.expect(")");
    term.ops.push_back(KernelOp{off, spin, nu.text == "+" ? Nu::Create : Nu::Annihilate});
  }
  return term;
}

RawConfig parse_config(const std::string& text) {
  Parser p(tokenize(text));
  RawConfig cfg;
  // lattice geometry first so terms can be dimension-checked; scan once
  {
    Parser scan(tokenize(text));
    while (!scan.done()) {
      Token t = scan.next();
      if (t.text == "lattice") {
        scan.expect("{");
        while (scan.peek().text != "}") {
          Token key = scan.next();
          if (key.text == "d")
            cfg.dim = int(scan.integer());
          else if (key.text == "spins")
            cfg.spins = int(scan.integer());
          else if (key.text == "side")
            cfg.side = int(scan.integer());
          else if (key.text == "l")
            cfg.side = 2 * int(scan.integer()) + 1;
          else
            throw ConfigError("unknown lattice key '" + key.text + "'", key.line, key.col);
        }
        scan.expect("}");
      }
    }
  }

  while (!p.done()) {
    Token t = p.next();
    if (t.text == "lattice") {
      p.expect("{");
      while (p.peek().text != "}") p.next();
      p.expect("}");
    } else if (t.text == "beta") {
      cfg.beta = p.number();
    } else if (t.text == "preset") {
      Token name = p.next();
      cfg.preset = name.text;
      if (!p.done() && p.peek().text == "{") {
        p.expect("{");
        while (p.peek().text != "}") {
          Token key = p.next();
          cfg.preset_params[key.text] = p.number();
        }
        p.expect("}");
      }
    } else if (t.text == "local") {
      int dim = cfg.dim.value_or(1), spins = cfg.spins.value_or(1);
      p.expect("{");
      while (p.peek().text != "}") {
        p.expect("term");
        cfg.local.push_back(parse_term(p, dim, spins));
      }
      p.expect("}");
    } else if (t.text == "channel") {
      int dim = cfg.dim.value_or(1), spins = cfg.spins.value_or(1);
      RawChannel ch;
      p.expect("{");
      while (p.peek().text != "}") {
        Token key = p.next();
        if (key.text == "gamma") {
          double g = p.number();
          if (g != -1 && g != 1) throw ConfigError("gamma must be -1 or +1", key.line, key.col);
          ch.gamma = int(g);
          ch.gamma_seen = true;
        } else if (key.text == "weight") {
          ch.weight = p.number();
          if (!(ch.weight > 0)) throw ConfigError("channel weight must be positive", key.line, key.col);
        } else if (key.text == "term") {
          ch.terms.push_back(parse_term(p, dim, spins));
        } else if (key.text == "prime") {
          ch.primes.push_back(parse_term(p, dim, spins));
        } else {
          throw ConfigError("unknown channel key '" + key.text + "'", key.line, key.col);
        }
      }
      p.expect("}");
      if (!ch.gamma_seen) throw ConfigError("channel needs an explicit gamma", t.line, t.col);
      cfg.channels.push_back(std::move(ch));
    } else {
      throw ConfigError("unknown section '" + t.text + "'", t.line, t.col);
    }
  }
  return cfg;
}

double param(const RawConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.preset_params.find(key);
  return it == cfg.preset_params.end() ? fallback : it->second;
}

void expand_preset(RawConfig& cfg, InteractionKernel& local, std::vector<Channel>& channels) {
  const std::string& name = *cfg.preset;
  if (name == "bcs") {
    if (!cfg.spins) cfg.spins = 2;
    if (*cfg.spins != 2) throw ConfigError("the bcs preset needs spins 2", 1, 1);
    double t = param(cfg, "t", 0.0);
    double mu = param(cfg, "mu", 0.0);
    double g = param(cfg, "g", 1.0);
    if (t != 0) local += kernel_hopping(t, 2, cfg.dim.value_or(1));
    if (mu != 0) local += kernel_chemical_potential(mu, 2);
    auto [phi, phi_prime] = channel_pair_from_observable(pairing_observable_onsite());
    channels.push_back(Channel{std::move(phi), std::move(phi_prime), -1, g});
  } else if (name == "forward") {
    if (!cfg.spins) cfg.spins = 1;
    double t = param(cfg, "t", 0.0);
    double mu = param(cfg, "mu", 0.0);
    double g = param(cfg, "g", 1.0);
    int sign = param(cfg, "gamma", +1.0) >= 0 ? +1 : -1;
    int spins = *cfg.spins;
    if (t != 0) local += kernel_hopping(t, spins, cfg.dim.value_or(1));
    if (mu != 0) local += kernel_chemical_potential(mu, spins);
    std::vector<ObservableMonomial> density;
    for (int s = 0; s < spins; ++s) density.push_back({1.0, {cr({0, 0, 0}, s), an({0, 0, 0}, s)}});
    auto [phi, phi_prime] = channel_pair_from_observable(density);
    channels.push_back(Channel{std::move(phi), std::move(phi_prime), sign, g});
  } else if (name == "hubbard-type") {
    if (!cfg.spins) cfg.spins = 2;
    double t = param(cfg, "t", 0.0);
    double mu = param(cfg, "mu", 0.0);
    double lambda = param(cfg, "lambda", 1.0);
    int spins = *cfg.spins;
    if (t != 0) local += kernel_hopping(t, spins, cfg.dim.value_or(1));
    if (mu != 0) local += kernel_chemical_potential(mu, spins);
    std::vector<ObservableMonomial> density;
    for (int s = 0; s < spins; ++s) density.push_back({1.0, {cr({0, 0, 0}, s), an({0, 0, 0}, s)}});
    auto [phi, phi_prime] = channel_pair_from_observable(density);
    channels.push_back(Channel{std::move(phi), std::move(phi_prime), lambda >= 0 ? +1 : -1, std::abs(lambda)});
  } else {
    throw ConfigError("unknown preset '" + name + "'", 1, 1);
  }
}

}  // namespace

LongRangeModel load_model(const std::string& text) {
  RawConfig cfg = parse_config(text);
  InteractionKernel local;
  std::vector<Channel> channels;
  if (cfg.preset) expand_preset(cfg, local, channels);

  int dim = cfg.dim.value_or(1);
  int spins = cfg.spins.value_or(1);
  int side = cfg.side.value_or(3);
  double beta = cfg.beta.value_or(1.0);

  for (const auto& t : cfg.local) local.add_monomial(t.coef, t.ops);
  for (const auto& rch : cfg.channels) {
    InteractionKernel phi, phi_prime;
    for (const auto& t : rch.terms) phi.add_monomial(t.coef, t.ops);
    for (const auto& t : rch.primes) phi_prime.add_monomial(t.coef, t.ops);
    channels.push_back(Channel{std::move(phi), std::move(phi_prime), rch.gamma, rch.weight});
  }

  LongRangeModel m(Lattice(dim, spins, side), beta, std::move(local), std::move(channels));
  m.validate();
  return m;
}

LongRangeModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

namespace {

void dump_kernel(std::ostream& os, const InteractionKernel& k, const char* keyword, int dim) {
  os.precision(17);
  for (const auto& t : k.terms()) {
    os << "  " << keyword << ' ' << t.coef.real() << ' ' << t.coef.imag();
    for (const auto& op : t.ops) {
      os << "  ( " << (op.nu == Nu::Create ? '+' : '-') << ' ' << op.spin;
      for (int i = 0; i < dim; ++i) os << ' ' << op.off[i];
      os << " )";
    }
    os << '\n';
  }
}

}  // namespace

std::string serialize_config(const LongRangeModel& m) {
  std::ostringstream os;
  os.precision(17);
  os << "lattice { d " << m.lattice().dim() << "  spins " << m.lattice().spins() << "  side "
     << m.lattice().side() << " }\n";
  os << "beta " << m.beta() << "\n";
  if (!m.local().empty()) {
    os << "local {\n";
    dump_kernel(os, m.local(), "term", m.lattice().dim());
    os << "}\n";
  }
  for (const auto& ch : m.channels()) {
    os << "channel {\n  gamma " << ch.gamma << "\n  weight " << ch.weight << "\n";
    dump_kernel(os, ch.phi, "term", m.lattice().dim());
    dump_kernel(os, ch.phi_prime, "prime", m.lattice().dim());
    os << "}\n";
  }
  return os.str();
}

}  // namespace lrf
