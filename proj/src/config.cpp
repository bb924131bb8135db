#include "mikado/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mikado
{

namespace
{

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
  {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double to_double(const std::string &key, const std::string &v)
{
  std::size_t used = 0;
  double x = 0.0;
  try
  {
    x = std::stod(v, &used);
  }
  catch (const std::exception &)
  {
    used = 0;
  }
  if (used != v.size())
  {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
  return x;
}

long to_long(const std::string &key, const std::string &v)
{
  const double x = to_double(key, v);
  if (x != static_cast<double>(static_cast<long>(x)))
  {
    throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
  }
  return static_cast<long>(x);
}

bool to_bool(const std::string &key, const std::string &v)
{
  if (v == "true")
  {
    return true;
  }
  if (v == "false")
  {
    return false;
  }
  throw ConfigError("config: " + key + " expects true or false, got '" + v + "'");
}

std::string to_string(const std::string &key, const std::string &v)
{
  if (v.size() < 2 || v.front() != '"' || v.back() != '"')
  {
    throw ConfigError("config: " + key + " expects a quoted string");
  }
  return v.substr(1, v.size() - 2);
}

std::vector<long> to_list(const std::string &key, const std::string &v)
{
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
  {
    throw ConfigError("config: " + key + " expects a list [a, b, ...]");
  }
  std::vector<long> out;
  std::stringstream ss(v.substr(1, v.size() - 2));
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (!item.empty())
    {
      out.push_back(to_long(key, item));
    }
  }
  return out;
}

std::string list(const std::vector<long> &v)
{
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    s += (i ? ", " : "") + std::to_string(v[i]);
  }
  return s + "]";
}

}  // namespace

double RunConfig::t_min() const
{
  const auto n = params.scales_N();
  const double NK = static_cast<double>(n.at(params.K));
  return t_min_factor / (NK * NK);
}

RunConfig parse_config(const std::string &text, RunConfig c)
{
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos && line.find('"') == std::string::npos)
    {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty() || line.front() == '[')
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    ParameterSet &p = c.params;
    if (key == "A") p.A = to_double(key, v);
    else if (key == "b") p.b = to_double(key, v);
    else if (key == "gamma") p.gamma = to_double(key, v);
    else if (key == "alpha") p.alpha = to_double(key, v);
    else if (key == "kappa") p.kappa = to_double(key, v);
    else if (key == "delta") p.delta = to_double(key, v);
    else if (key == "delta0") p.delta0 = to_double(key, v);
    else if (key == "K") p.K = static_cast<int>(to_long(key, v));
    else if (key == "strict_mode") p.strict_mode = to_bool(key, v);
    else if (key == "M") p.M = to_list(key, v);
    else if (key == "N") p.N = to_list(key, v);
    else if (key == "mollifier_fraction") p.mollifier_fraction = to_double(key, v);
    else if (key == "grid") c.grid = static_cast<int>(to_long(key, v));
    else if (key == "t_min_factor") c.t_min_factor = to_double(key, v);
    else if (key == "t_max") c.t_max = to_double(key, v);
    else if (key == "per_decade") c.per_decade = static_cast<int>(to_long(key, v));
    else if (key == "out") c.out = to_string(key, v);
    else if (key == "seed") c.seed = static_cast<unsigned long long>(to_long(key, v));
    else if (key == "parity") c.parity = to_string(key, v);
    else if (key == "picard_crosscheck") c.picard_crosscheck = to_bool(key, v);
    else if (key == "all_terms") c.all_terms = to_bool(key, v);
    else if (key == "t_end") c.t_end = to_double(key, v);
    else if (key == "escape_ratio") c.escape_ratio = to_double(key, v);
    else if (key == "cfl") c.cfl = to_double(key, v);
    else if (key == "max_steps") c.max_steps = to_long(key, v);
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (c.parity != "1" && c.parity != "2" && c.parity != "both")
  {
    throw ConfigError("config: parity must be 1, 2 or both");
  }
  return c;
}

RunConfig load_config(const std::string &path, RunConfig base)
{
  std::ifstream f(path);
  if (!f)
  {
    throw ConfigError("config: cannot read " + path);
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), base);
}

std::string to_text(const RunConfig &c)
{
  const ParameterSet &p = c.params;
  std::ostringstream os;
  os << "A = " << num(p.A) << "\n"
     << "b = " << num(p.b) << "\n"
     << "gamma = " << num(p.gamma) << "\n"
     << "alpha = " << num(p.alpha) << "\n"
     << "kappa = " << num(p.kappa) << "\n"
     << "delta = " << num(p.delta) << "\n"
     << "delta0 = " << num(p.delta0) << "\n"
     << "K = " << p.K << "\n"
     << "strict_mode = " << (p.strict_mode ? "true" : "false") << "\n"
     << "M = " << list(p.M) << "\n"
     << "N = " << list(p.N) << "\n"
     << "mollifier_fraction = " << num(p.mollifier_fraction) << "\n"
     << "grid = " << c.grid << "\n"
     << "t_min_factor = " << num(c.t_min_factor) << "\n"
     << "t_max = " << num(c.t_max) << "\n"
     << "per_decade = " << c.per_decade << "\n"
     << "out = \"" << c.out << "\"\n"
     << "seed = " << c.seed << "\n"
     << "parity = \"" << c.parity << "\"\n"
     << "picard_crosscheck = " << (c.picard_crosscheck ? "true" : "false") << "\n"
     << "all_terms = " << (c.all_terms ? "true" : "false") << "\n"
     << "t_end = " << num(c.t_end) << "\n"
     << "escape_ratio = " << num(c.escape_ratio) << "\n"
     << "cfl = " << num(c.cfl) << "\n"
     << "max_steps = " << c.max_steps << "\n";
  return os.str();
}

std::string config_hash(const RunConfig &c)
{
  std::uint64_t h = 1469598103934665603ULL;
  RunConfig k = c;
  k.out.clear();  // the output location does not enter the hash
  for (unsigned char ch : to_text(k))
  {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mikado
