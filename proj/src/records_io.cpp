#include "ksosbo/records_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ksosbo/errors.hpp"

namespace ksosbo {

const std::vector<std::string> kRunColumns{"benchmark", "dim",    "optimizer",   "acquisition",
                                           "seed",      "iteration", "query",    "observed",
                                           "best_so_far", "regret", "iter_wall_seconds", "cum_wall_seconds"};

const std::vector<std::string> kSummaryColumns{"benchmark",       "dim",  "optimizer",       "final_mean_regret",
                                               "ci_half_width",   "rank", "improvement_pct", "time_to_threshold_s",
                                               "runtime_improvement_pct"};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw InputError(context + ": cannot parse '" + s + "' as a number");
  }
  return v;
}

namespace {

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : kNa; }

std::optional<double> parse_opt(const std::string& s, const std::string& context) {
  if (s == kNa) return std::nullopt;
  return parse_double(s, context);
}

long long parse_int(const std::string& s, const std::string& context) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw InputError(context + ": cannot parse '" + s + "' as an integer");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

// Reads a CSV and checks the header against `columns`.
std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path,
                                                 const std::vector<std::string>& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() != columns.size()) {
    throw InputError(path.string() + ": expected " + std::to_string(columns.size()) + " columns, found " +
                     std::to_string(header.size()));
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (header[j] != columns[j]) {
      throw InputError(path.string() + ": column " + std::to_string(j + 1) + " is '" + header[j] + "', expected '" +
                       columns[j] + "'");
    }
  }
  std::vector<std::vector<std::string>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns.size()) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns.size()) +
                       " fields, found " + std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string run_csv_name(const std::string& benchmark, int dim, const std::string& optimizer) {
  return "runs_" + benchmark + "_d" + std::to_string(dim) + "_" + optimizer + ".csv";
}

std::string diagnostics_csv_name(const std::string& benchmark, int dim, const std::string& optimizer) {
  return "diag_" + benchmark + "_d" + std::to_string(dim) + "_" + optimizer + ".csv";
}

void write_run_csv(const std::filesystem::path& path, const std::vector<const RunRecord*>& runs) {
  auto out = open_out(path);
  out << join(kRunColumns, ',') << '\n';
  for (const auto* r : runs) {
    for (const auto& row : r->rows) {
      std::vector<std::string> q;
      for (Eigen::Index j = 0; j < row.query.size(); ++j) q.push_back(format_double(row.query(j)));
      out << r->benchmark << ',' << r->dim << ',' << r->optimizer << ',' << r->acquisition << ',' << r->seed << ','
          << row.iteration << ',' << join(q, ';') << ',' << format_double(row.observed) << ','
          << format_double(row.best_so_far) << ',' << format_double(row.regret) << ','
          << format_double(row.iter_wall_seconds) << ',' << format_double(row.cum_wall_seconds) << '\n';
    }
  }
  close_out(out, path);
}

std::vector<RunRecord> read_run_csv(const std::filesystem::path& path) {
  const auto table = read_table(path, kRunColumns);
  std::vector<RunRecord> runs;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& f = table[i];
    const std::string ctx = path.string() + ":" + std::to_string(i + 2);
    const auto seed = static_cast<std::uint64_t>(parse_int(f[4], ctx + " seed"));
    RunRecord* rec = nullptr;
    for (auto& r : runs) {
      if (r.seed == seed) rec = &r;
    }
    if (!rec) {
      runs.emplace_back();
      rec = &runs.back();
      rec->benchmark = f[0];
      rec->dim = static_cast<int>(parse_int(f[1], ctx + " dim"));
      rec->optimizer = f[2];
      rec->acquisition = f[3];
      rec->seed = seed;
    }
    RunRow row;
    row.iteration = static_cast<int>(parse_int(f[5], ctx + " iteration"));
    std::vector<double> q;
    std::stringstream ss(f[6]);
    std::string part;
    while (std::getline(ss, part, ';')) q.push_back(parse_double(part, ctx + " query"));
    row.query = Eigen::Map<Point>(q.data(), static_cast<Eigen::Index>(q.size()));
    row.observed = parse_double(f[7], ctx + " observed");
    row.best_so_far = parse_double(f[8], ctx + " best_so_far");
    row.regret = parse_double(f[9], ctx + " regret");
    row.iter_wall_seconds = parse_double(f[10], ctx + " iter_wall_seconds");
    row.cum_wall_seconds = parse_double(f[11], ctx + " cum_wall_seconds");
    rec->rows.push_back(std::move(row));
  }
  return runs;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<const RunRecord*>& runs) {
  auto out = open_out(path);
  out << "seed,iteration,acquisition_evaluations,gp_constant,gp_lengthscale,newton_iters,residual_norm,status,"
         "used_fallback\n";
  for (const auto* r : runs) {
    for (const auto& row : r->rows) {
      if (!row.diagnostics) continue;
      const auto& d = *row.diagnostics;
      out << r->seed << ',' << row.iteration << ',' << d.acquisition_evaluations << ',' << format_double(d.gp_constant)
          << ',' << format_double(d.gp_lengthscale) << ','
          << (d.newton_iters ? std::to_string(*d.newton_iters) : std::string(kNa)) << ','
          << opt_field(d.residual_norm) << ',' << (d.status ? to_string(*d.status) : std::string(kNa)) << ','
          << (d.used_fallback ? 1 : 0) << '\n';
    }
  }
  close_out(out, path);
}

void write_failures_csv(const std::filesystem::path& path, const std::vector<const RunRecord*>& failed) {
  auto out = open_out(path);
  out << "benchmark,dim,optimizer,seed,completed_rows,error\n";
  for (const auto* r : failed) {
    out << r->benchmark << ',' << r->dim << ',' << r->optimizer << ',' << r->seed << ',' << r->rows.size() << ','
        << quote(r->error) << '\n';
  }
  close_out(out, path);
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows) {
  auto out = open_out(path);
  out << join(kSummaryColumns, ',') << '\n';
  for (const auto& r : rows) {
    out << r.benchmark << ',' << r.dim << ',' << r.optimizer << ',' << format_double(r.final_mean_regret) << ','
        << format_double(r.ci_half_width) << ',' << r.rank << ',' << opt_field(r.improvement_pct) << ','
        << opt_field(r.time_to_threshold_s) << ',' << opt_field(r.runtime_improvement_pct) << '\n';
  }
  close_out(out, path);
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
  std::vector<SummaryRow> rows;
  const auto table = read_table(path, kSummaryColumns);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& f = table[i];
    const std::string ctx = path.string() + ":" + std::to_string(i + 2);
    SummaryRow r;
    r.benchmark = f[0];
    r.dim = static_cast<int>(parse_int(f[1], ctx + " dim"));
    r.optimizer = f[2];
    r.final_mean_regret = parse_double(f[3], ctx + " final_mean_regret");
    r.ci_half_width = parse_double(f[4], ctx + " ci_half_width");
    r.rank = static_cast<int>(parse_int(f[5], ctx + " rank"));
    r.improvement_pct = parse_opt(f[6], ctx + " improvement_pct");
    r.time_to_threshold_s = parse_opt(f[7], ctx + " time_to_threshold_s");
    r.runtime_improvement_pct = parse_opt(f[8], ctx + " runtime_improvement_pct");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace ksosbo
