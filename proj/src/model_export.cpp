#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include "fcr/solver.hpp"

namespace fcr {

ModelFormat parse_model_format(const std::string& text) {
  if (text == "mps" || text == "fixed-mps") return ModelFormat::FixedMps;
  if (text == "free-mps") return ModelFormat::FreeMps;
  if (text == "lp") return ModelFormat::Lp;
  throw UnsupportedFormat("unsupported model format '" + text + "' (mps, free-mps, lp)");
}

namespace {

std::string num(double v) {
  if (v == 0.0) return "0";  // also folds -0
  return fmt::format("{}", v);
}

bool lp_char_ok(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("!\"#$%&()/,.;?@_`'{}|~").find(c) != std::string_view::npos;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string lp_name(const std::string& original) {
  std::string s;
  s.reserve(original.size());
  for (char c : original) {
    if (c == '[') s.push_back('(');
    else if (c == ']') s.push_back(')');
    else if (lp_char_ok(c)) s.push_back(c);
    else s.push_back('_');
  }
  static const std::set<std::string> keywords = {"st", "s.t.", "subject", "to", "bound", "bounds", "free", "inf",
                                                 "infinity", "bin", "binary", "binaries", "gen", "general",
                                                 "generals", "end", "max", "min", "maximize", "minimize"};
  const bool bad_start = s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.' ||
                         ((s[0] == 'e' || s[0] == 'E') && s.size() > 1 &&
                          (std::isdigit(static_cast<unsigned char>(s[1])) || s[1] == '+' || s[1] == '-'));
  if (bad_start || keywords.count(lower(s))) s.insert(s.begin(), '_');
  return s;
}

std::string free_mps_name(const std::string& original) {
  std::string s = original;
  for (auto& c : s)
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  if (s.empty()) s = "_";
  return s;
}

// Applies the per-format rewrite, truncates to kMaxExportName and makes the
// result unique with a `~index` suffix.
class NameTable {
 public:
  NameTable(ModelFormat format, char prefix, std::unordered_set<std::string> reserved)
      : format_(format), prefix_(prefix), used_(std::move(reserved)) {}

  std::string add(const std::string& original, Index index) {
    std::string s;
    if (format_ == ModelFormat::FixedMps) {
      s = fmt::format("{}{:07d}", prefix_, index);
    } else {
      s = format_ == ModelFormat::Lp ? lp_name(original) : free_mps_name(original);
      if (s.size() > kMaxExportName || used_.count(s)) {
        const auto suffix = fmt::format("~{}", index);
        if (s.size() + suffix.size() > kMaxExportName) s.resize(kMaxExportName - suffix.size());
        s += suffix;
      }
    }
    used_.insert(s);
    if (s != original) renamed_.push_back({index, s, original});
    names_.push_back(s);
    return s;
  }

  struct Rename {
    Index index;
    std::string written, original;
  };
  const std::vector<Rename>& renamed() const { return renamed_; }
  std::vector<std::string>& names() { return names_; }

 private:
  ModelFormat format_;
  char prefix_;
  std::unordered_set<std::string> used_;
  std::vector<std::string> names_;
  std::vector<Rename> renamed_;
};

constexpr const char* kObjRow = "OBJ";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  return q + "\"";
}

void write_mps(std::ostream& out, const MilpModel& m, bool fixed, const std::vector<std::string>& cols,
               const std::vector<std::string>& rows, const std::string& name) {
  auto entry = [&](const std::string& a, const std::string& b, const std::string& v) {
    if (fixed) return fmt::format("    {:<8}  {:<8}  {:>12}\n", a, b, v);
    return fmt::format("    {} {} {}\n", a, b, v);
  };
  auto bound = [&](const char* type, const std::string& col, const std::string& v) {
    if (fixed) return fmt::format(" {:<2} {:<8}  {:<8}  {:>12}\n", type, "BND", col, v);
    return fmt::format(" {} BND {} {}\n", type, col, v);
  };

  out << "NAME          " << name << "\n";
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n";
  out << " N  " << kObjRow << "\n";
  for (std::size_t i = 0; i < m.constraints().size(); ++i) {
    const auto s = m.constraints()[i].sense;
    const char type = s == Sense::LessEqual ? 'L' : s == Sense::GreaterEqual ? 'G' : 'E';
    out << ' ' << type << "  " << rows[i] << "\n";
  }

  // Column-major view of the rows.
  std::vector<std::vector<std::pair<std::size_t, double>>> by_col(static_cast<std::size_t>(m.num_variables()));
  for (std::size_t i = 0; i < m.constraints().size(); ++i)
    for (const auto& t : m.constraints()[i].terms) by_col[static_cast<std::size_t>(t.col)].push_back({i, t.coef});

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (Index j = 0; j < m.num_variables(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const bool is_int = m.variable(j).type == VarType::Binary;
    if (is_int != in_int) {
      const auto tag = fmt::format("MARKER{:02d}", marker++ % 100);
      out << fmt::format("    {:<8}  {:<8}  {:>12}\n", tag, "'MARKER'", is_int ? "'INTORG'" : "'INTEND'");
      in_int = is_int;
    }
    const double c = m.objective()[ju];
    if (c != 0.0 || by_col[ju].empty()) out << entry(cols[ju], kObjRow, num(c));
    for (const auto& [row, coef] : by_col[ju]) out << entry(cols[ju], rows[row], num(coef));
  }
  if (in_int) out << fmt::format("    {:<8}  {:<8}  {:>12}\n", fmt::format("MARKER{:02d}", marker % 100), "'MARKER'", "'INTEND'");

  out << "RHS\n";
  if (m.objective_constant() != 0.0) out << entry("RHS", kObjRow, num(-m.objective_constant()));
  for (std::size_t i = 0; i < m.constraints().size(); ++i)
    if (m.constraints()[i].rhs != 0.0) out << entry("RHS", rows[i], num(m.constraints()[i].rhs));

  out << "BOUNDS\n";
  for (Index j = 0; j < m.num_variables(); ++j) {
    const auto& v = m.variable(j);
    const auto& n = cols[static_cast<std::size_t>(j)];
    if (v.lower == v.upper) {
      out << bound("FX", n, num(v.lower));
    } else if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << bound("FR", n, "");
    } else {
      if (std::isinf(v.lower)) out << bound("MI", n, "");
      else if (v.lower != 0.0) out << bound("LO", n, num(v.lower));
      if (!std::isinf(v.upper)) out << bound("UP", n, num(v.upper));
    }
  }
  out << "ENDATA\n";
}

void write_lp(std::ostream& out, const MilpModel& m, const std::vector<std::string>& cols,
              const std::vector<std::string>& rows, const std::string& name) {
  auto write_terms = [&](const std::vector<std::pair<Index, double>>& terms) {
    int on_line = 0;
    for (const auto& [j, c] : terms) {
      if (on_line == 6) {
        out << "\n   ";
        on_line = 0;
      }
      out << (c < 0 ? " - " : " + ") << num(std::abs(c)) << ' ' << cols[static_cast<std::size_t>(j)];
      ++on_line;
    }
    if (terms.empty()) out << " 0 " << cols.front();
  };

  out << "\\ " << name << "\n";
  out << "Maximize\n obj:";
  std::vector<std::pair<Index, double>> obj;
  for (Index j = 0; j < m.num_variables(); ++j)
    if (m.objective()[static_cast<std::size_t>(j)] != 0.0) obj.push_back({j, m.objective()[static_cast<std::size_t>(j)]});
  write_terms(obj);
  if (m.objective_constant() != 0.0)
    out << (m.objective_constant() < 0 ? " - " : " + ") << num(std::abs(m.objective_constant()));
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < m.constraints().size(); ++i) {
    const auto& r = m.constraints()[i];
    std::vector<std::pair<Index, double>> terms;
    terms.reserve(r.terms.size());
    for (const auto& t : r.terms) terms.push_back({t.col, t.coef});
    out << ' ' << rows[i] << ':';
    write_terms(terms);
    const char* op = r.sense == Sense::LessEqual ? "<=" : r.sense == Sense::GreaterEqual ? ">=" : "=";
    out << ' ' << op << ' ' << num(r.rhs) << "\n";
  }
  out << "Bounds\n";
  std::vector<Index> binaries;
  for (Index j = 0; j < m.num_variables(); ++j) {
    const auto& v = m.variable(j);
    const auto& n = cols[static_cast<std::size_t>(j)];
    const bool is_bin = v.type == VarType::Binary;
    if (is_bin) binaries.push_back(j);
    if (v.lower == v.upper) {
      out << ' ' << n << " = " << num(v.lower) << "\n";
    } else if (is_bin) {
      continue;
    } else if (std::isinf(v.lower) && std::isinf(v.upper)) {
      out << ' ' << n << " free\n";
    } else if (std::isinf(v.lower)) {
      out << " -inf <= " << n << " <= " << num(v.upper) << "\n";
    } else if (!std::isinf(v.upper)) {
      out << ' ' << num(v.lower) << " <= " << n << " <= " << num(v.upper) << "\n";
    } else if (v.lower != 0.0) {
      out << ' ' << n << " >= " << num(v.lower) << "\n";
    }
  }
  if (!binaries.empty()) {
    out << "Binaries\n";
    for (std::size_t k = 0; k < binaries.size(); ++k)
      out << (k % 8 == 0 ? (k ? "\n " : " ") : " ") << cols[static_cast<std::size_t>(binaries[k])];
    out << "\n";
  }
  out << "End\n";
}

}  // namespace

ExportResult export_model(const MilpModel& m, ModelFormat format, const std::filesystem::path& path,
                          const std::string& name) {
  m.check();
  if (m.num_variables() == 0) throw std::invalid_argument("export_model: model has no columns");
  NameTable cols(format, 'C', {});
  NameTable rows(format, 'R', {kObjRow, "obj"});
  for (Index j = 0; j < m.num_variables(); ++j) cols.add(m.variable(j).name, j);
  for (Index i = 0; i < m.num_constraints(); ++i) rows.add(m.constraints()[static_cast<std::size_t>(i)].name, i);

  ExportResult result;
  result.model_file = path;
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    if (format == ModelFormat::Lp) write_lp(out, m, cols.names(), rows.names(), name);
    else write_mps(out, m, format == ModelFormat::FixedMps, cols.names(), rows.names(), name);
  }

  auto sidecar = path;
  sidecar += ".names.csv";
  if (!cols.renamed().empty() || !rows.renamed().empty()) {
    std::ofstream out(sidecar, std::ios::binary);
    out << "kind,index,written,original\n";
    for (const auto& r : cols.renamed()) out << "col," << r.index << ',' << csv_field(r.written) << ',' << csv_field(r.original) << "\n";
    for (const auto& r : rows.renamed()) out << "row," << r.index << ',' << csv_field(r.written) << ',' << csv_field(r.original) << "\n";
    result.name_map_file = sidecar;
  } else {
    std::filesystem::remove(sidecar);
  }
  result.column_names = std::move(cols.names());
  result.row_names = std::move(rows.names());
  return result;
}

}  // namespace fcr
