#include "config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mcms::cli {

namespace {

constexpr std::array<std::string_view, 7> kArtifacts = {
    "windows", "points", "nu", "grids", "density_csv", "summary", "report"};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_plain(std::string_view t) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw std::invalid_argument("not a number: '" + std::string(t) + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view t) {
  t = trim(t);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw std::invalid_argument("not an integer: '" + std::string(t) + "'");
  return v;
}

std::vector<double> reals(std::string_view s) {
  std::vector<double> out;
  for (auto w : words(s)) out.push_back(parse_real(w));
  return out;
}

CycInt parse_cyc(std::string_view s) {
  const auto w = words(s);
  if (w.size() != 4) throw std::invalid_argument("expected 4 integer coefficients");
  return {parse_int<std::int64_t>(w[0]), parse_int<std::int64_t>(w[1]),
          parse_int<std::int64_t>(w[2]), parse_int<std::int64_t>(w[3])};
}

// "window.3" -> 3
int indexed_key(std::string_view key, std::string_view prefix) {
  const int k = parse_int<int>(key.substr(prefix.size()));
  if (k < 1) throw std::invalid_argument("component index must be >= 1");
  return k;
}

}  // namespace

double parse_real(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text);
  const double den = parse_plain(trim(text.substr(slash + 1)));
  if (den == 0.0) throw std::invalid_argument("division by zero in '" + std::string(text) + "'");
  return parse_plain(trim(text.substr(0, slash))) / den;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  if (key == "scheme") {
    if (value != "penrose" && value != "custom")
      throw std::invalid_argument("scheme must be penrose or custom");
    c.scheme = value;
  } else if (key == "r") {
    c.custom_rank = parse_int<int>(value);
    if (c.custom_rank < 1) throw std::invalid_argument("r must be >= 1");
  } else if (key.starts_with("window.")) {
    const int k = indexed_key(key, "window.");
    std::vector<Vec2> verts;
    for (auto pair : split(value, ';')) {
      if (pair.empty()) continue;
      const auto xy = reals(pair);
      if (xy.size() != 2) throw std::invalid_argument("window vertex needs 2 coordinates");
      verts.emplace_back(xy[0], xy[1]);
    }
    c.custom_windows[k] = std::move(verts);
  } else if (key.starts_with("coset.")) {
    c.custom_cosets[indexed_key(key, "coset.")] = parse_cyc(value);
  } else if (key == "q") {
    c.custom_q = parse_cyc(value);
  } else if (key == "nu_policy") {
    if (value != "area-markov" && value != "scale-markov" && value != "explicit")
      throw std::invalid_argument("nu_policy must be area-markov, scale-markov or explicit");
    c.nu_policy = value;
  } else if (key == "nu") {
    std::vector<std::vector<double>> rows;
    for (auto row : split(value, ';'))
      if (!row.empty()) rows.push_back(reals(row));
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (static_cast<Eigen::Index>(rows[j].size()) != n)
        throw std::invalid_argument("nu must be square");
      for (Eigen::Index i = 0; i < n; ++i) m(j, i) = rows[j][i];
    }
    c.nu = m;
  } else if (key == "gamma") {
    const auto g = reals(value);
    if (g.size() != 2) throw std::invalid_argument("gamma needs 2 values");
    c.gamma = Vec2(g[0], g[1]);
  } else if (key == "boundary") {
    if (value == "closed") c.boundary = BoundaryMode::Closed;
    else if (value == "open") c.boundary = BoundaryMode::Open;
    else throw std::invalid_argument("boundary must be closed or open");
  } else if (key == "s") {
    c.s = parse_real(value);
  } else if (key == "h") {
    c.h = parse_real(value);
  } else if (key == "tol") {
    c.tol = parse_real(value);
  } else if (key == "maxit") {
    c.maxit = parse_int<int>(value);
  } else if (key == "supersample") {
    c.supersample = parse_int<int>(value);
  } else if (key == "outputs") {
    c.outputs.clear();
    for (auto w : words(value)) {
      if (std::find(kArtifacts.begin(), kArtifacts.end(), w) == kArtifacts.end())
        throw std::invalid_argument("unknown output '" + std::string(w) + "'");
      c.outputs.emplace_back(w);
    }
  } else if (key == "id2.samples") {
    c.id2_samples = parse_int<int>(value);
  } else if (key == "id2.seed") {
    c.id2_seed = parse_int<std::uint64_t>(value);
  } else if (key == "closure_s") {
    c.closure_s = parse_real(value);
  } else if (key == "compare.count") {
    c.compare_count = parse_int<int>(value);
  } else if (key == "compare.kmax") {
    c.compare_kmax = parse_real(value);
  } else if (key == "compare.seed") {
    c.compare_seed = parse_int<std::uint64_t>(value);
  } else {
    throw std::invalid_argument("unknown key '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    ++lineno;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value", lineno);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key", lineno);
    try {
      apply_setting(base, key, value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
    }
  }
  return base;
}

std::string preset_text(std::string_view name) {
  if (name == "penrose-example1")
    return "scheme = penrose\n"
           "nu_policy = scale-markov\n";
  if (name == "penrose-example2")
    return "scheme = penrose\n"
           "nu_policy = explicit\n"
           "nu = 1/2 0 0 1/2; 1/4 1/4 1/4 1/4; 1/4 1/4 1/4 1/4; 1/2 0 0 1/2\n";
  throw ConfigError("unknown preset '" + std::string(name) + "'", 0);
}

RunConfig preset(std::string_view name) { return parse_config(preset_text(name)); }

SchemeSpec RunConfig::build_scheme() const {
  SchemeSpec spec;
  if (scheme == "penrose") {
    spec = penrose_scheme(gamma);
  } else {
    for (int k = 1; k <= custom_rank; ++k) {
      spec.windows.push_back(Region::polygon(custom_windows.at(k)));
      spec.coset_reps.push_back(custom_cosets.at(k));
    }
    spec.q_mult = custom_q;
    spec.gamma = gamma;
  }
  spec.boundary = boundary;
  return spec;
}

NuPolicy RunConfig::policy() const {
  if (nu_policy == "scale-markov") return ScaleMarkov{};
  if (nu_policy == "explicit") return ExplicitNu{*nu};
  return AreaMarkov{};
}

bool RunConfig::wants(std::string_view artifact) const {
  return outputs.empty() || std::find(outputs.begin(), outputs.end(), artifact) != outputs.end();
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m, 0); };
  if (!(s > 0.0)) fail("s must be > 0");
  if (!(h > 0.0)) fail("h must be > 0");
  if (!(tol > 0.0)) fail("tol must be > 0");
  if (maxit < 1) fail("maxit must be >= 1");
  if (supersample < 1) fail("supersample must be >= 1");
  if (id2_samples < 1) fail("id2.samples must be >= 1");
  if (!(closure_s > 0.0)) fail("closure_s must be > 0");
  if (compare_count < 1 || !(compare_kmax > 0.0)) fail("compare settings must be positive");

  if (scheme == "custom") {
    if (custom_rank < 1) fail("custom scheme needs r");
    for (int k = 1; k <= custom_rank; ++k) {
      if (!custom_windows.contains(k)) fail("missing window." + std::to_string(k));
      if (!custom_cosets.contains(k)) fail("missing coset." + std::to_string(k));
    }
    for (const auto& [k, v] : custom_windows)
      if (k > custom_rank) fail("window." + std::to_string(k) + " exceeds r");
    for (const auto& [k, v] : custom_cosets)
      if (k > custom_rank) fail("coset." + std::to_string(k) + " exceeds r");
  }
  SchemeSpec spec;
  try {
    spec = build_scheme();
    spec.validate();
  } catch (const std::exception& e) {
    fail(std::string("invalid scheme: ") + e.what());
  }

  if (nu_policy == "explicit") {
    if (!nu) fail("nu_policy = explicit needs nu");
    if (nu->rows() != spec.rank()) fail("nu must be " + std::to_string(spec.rank()) + "x" +
                                        std::to_string(spec.rank()));
    if ((nu->array() < 0.0).any()) fail("nu must be nonnegative");
  }
}

}  // namespace mcms::cli
