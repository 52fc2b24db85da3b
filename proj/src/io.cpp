#include "metahom/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "metahom/errors.hpp"

namespace metahom {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_csv_line(const std::string& line,
                                        std::size_t lineno) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      if (!cur.empty()) throw ParseError("stray quote in field", lineno);
      quoted = was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw ParseError("text after closing quote", lineno);
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", lineno);
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const char* what, std::size_t lineno) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw ParseError(std::string("invalid ") + what + " '" + text + "'",
                     lineno);
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* key,
                          std::size_t lineno) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(parse_number<T>(item, key, lineno));
    } catch (const ParseError& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

}  // namespace

std::string csv_field(const std::string& s) {
  const bool needs = s.find_first_of(",\"\r\n") != std::string::npos ||
                     (!s.empty() && (s.front() == ' ' || s.back() == ' ' ||
                                     s.front() == '\t' || s.back() == '\t'));
  if (!needs) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

MetaDataset read_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++lineno;
  strip_cr(line);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != kDatasetHeader)
    throw ParseError(std::string("expected header '") + kDatasetHeader + "'",
                     lineno);

  std::vector<StudyTable> studies;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line, lineno);
    if (f.size() != 5)
      throw ParseError("expected 5 fields, got " + std::to_string(f.size()),
                       lineno);
    const int x1 = parse_number<int>(f[1], "events_treatment", lineno);
    const int n1 = parse_number<int>(f[2], "total_treatment", lineno);
    const int x0 = parse_number<int>(f[3], "events_control", lineno);
    const int n0 = parse_number<int>(f[4], "total_control", lineno);
    try {
      studies.emplace_back(x1, n1, x0, n0, f[0]);
    } catch (const DomainError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (studies.size() < 2)
    throw ParseError("m >= 2 required, got " + std::to_string(studies.size()) +
                         " studies",
                     lineno);
  return MetaDataset(std::move(studies));
}

MetaDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const MetaDataset& ds) {
  out << kDatasetHeader << '\n';
  for (const auto& t : ds.studies())
    out << csv_field(t.label()) << ',' << t.x1() << ',' << t.n1() << ','
        << t.x0() << ',' << t.n0() << '\n';
}

PValueEntry parse_pvalue_pair(const std::string& text) {
  const auto sep = text.find_first_of(":,");
  if (sep == std::string::npos)
    throw ParseError("expected p:df, got '" + text + "'", 0);
  const double p = parse_number<double>(trim(text.substr(0, sep)), "p-value", 0);
  const int df = parse_number<int>(trim(text.substr(sep + 1)), "df", 0);
  return {p, df};
}

std::vector<PValueEntry> read_pvalue_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  strip_cr(line);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != "p_value,df") throw ParseError("expected header 'p_value,df'", 1);
  std::vector<PValueEntry> out;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line, lineno);
    if (f.size() != 2) throw ParseError("expected 2 fields", lineno);
    out.push_back({parse_number<double>(f[0], "p-value", lineno),
                   parse_number<int>(f[1], "df", lineno)});
  }
  return out;
}

std::vector<SimConfig> parse_sim_config(std::istream& in) {
  SimConfig base;
  std::vector<int> ms = {base.m};
  std::vector<double> betas = {base.beta};
  std::vector<double> tau2s = {base.tau2};
  std::map<std::string, std::size_t> seen;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (auto [it, fresh] = seen.emplace(key, lineno); !fresh)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");

    auto single = [&](auto list) {
      if (list.size() != 1)
        throw ConfigError("line " + std::to_string(lineno) + ": key '" + key +
                          "' takes exactly one value");
      return list.front();
    };
    const char* k = key.c_str();
    if (key == "m") {
      ms = parse_list<int>(value, k, lineno);
    } else if (key == "beta") {
      betas = parse_list<double>(value, k, lineno);
    } else if (key == "tau2") {
      tau2s = parse_list<double>(value, k, lineno);
    } else if (key == "delta") {
      base.delta = single(parse_list<double>(value, k, lineno));
    } else if (key == "alpha_mean") {
      base.alpha_mean = single(parse_list<double>(value, k, lineno));
    } else if (key == "sigma_alpha2") {
      base.sigma_alpha2 = single(parse_list<double>(value, k, lineno));
    } else if (key == "runs") {
      base.runs = single(parse_list<int>(value, k, lineno));
    } else if (key == "sig_level") {
      base.sig_level = single(parse_list<double>(value, k, lineno));
    } else if (key == "rhos") {
      base.rhos = parse_list<double>(value, k, lineno);
    } else if (key == "seed") {
      base.seed = single(parse_list<std::uint64_t>(value, k, lineno));
    } else if (key == "correction") {
      try {
        base.correction = parse_correction(value);
      } catch (const DomainError& e) {
        throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
      }
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
  }
  if (ms.empty() || betas.empty() || tau2s.empty())
    throw ConfigError("m, beta and tau2 need at least one value");
  auto grid = expand_grid(base, ms, betas, tau2s);
  for (const auto& cfg : grid) cfg.validate();
  return grid;
}

std::vector<SimConfig> parse_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_sim_config(in);
}

}  // namespace metahom
