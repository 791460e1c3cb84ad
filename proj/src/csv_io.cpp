#include "levy_transport/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace levy_transport {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  return v;
}

}  // namespace

void Metadata::set(const std::string& key, const std::string& value) {
  for (auto& e : entries_)
    if (e.first == key) {
      e.second = value;
      return;
    }
  entries_.emplace_back(key, value);
}

void Metadata::set(const std::string& key, double value) { set(key, format_double(value)); }
void Metadata::set(const std::string& key, long value) { set(key, std::to_string(value)); }
void Metadata::set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

const std::string* Metadata::find(const std::string& key) const {
  for (const auto& e : entries_)
    if (e.first == key) return &e.second;
  return nullptr;
}

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that round-trips exactly.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta.entries()) out << "# " << key << " = " << value << "\n";
}

Metadata read_metadata(std::istream& in) {
  Metadata meta;
  while (in.peek() == '#') {
    std::string line;
    std::getline(in, line);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    meta.set(trim(line.substr(1, eq - 1)), trim(line.substr(eq + 1)));
  }
  return meta;
}

void write_snapshots_csv(const std::string& path, const Metadata& meta,
                         const std::vector<double>& xs, const std::vector<MeanField>& fields) {
  auto out = open_out(path);
  write_metadata(out, meta);
  out << "t,x,value,stderr\n";
  for (const auto& mf : fields) {
    if (mf.mean.values.size() != xs.size())
      throw std::invalid_argument("write_snapshots_csv: field/grid size mismatch");
    const std::string t_str = format_double(mf.mean.time);
    for (std::size_t i = 0; i < xs.size(); ++i)
      out << t_str << ',' << format_double(xs[i]) << ',' << format_double(mf.mean.values[i])
          << ',' << format_double(mf.std_error.values[i]) << "\n";
  }
}

SnapshotsData read_snapshots_csv(const std::string& path) {
  auto in = open_in(path);
  SnapshotsData data;
  data.meta = read_metadata(in);
  std::string line;
  std::getline(in, line);  // header
  if (trim(line) != "t,x,value,stderr")
    throw std::runtime_error("read_snapshots_csv: unexpected header in " + path);
  double current_t = 0.0;
  bool have_t = false;
  MeanField current;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw std::runtime_error("read_snapshots_csv: malformed row");
    const double t = parse_double(cols[0]);
    const double x = parse_double(cols[1]);
    if (!have_t || t != current_t) {
      if (have_t) data.fields.push_back(std::move(current));
      current = MeanField{};
      current.mean.time = current.std_error.time = t;
      current_t = t;
      have_t = true;
    }
    if (data.fields.empty()) data.xs.push_back(x);
    current.mean.values.push_back(parse_double(cols[2]));
    current.std_error.values.push_back(parse_double(cols[3]));
  }
  if (have_t) data.fields.push_back(std::move(current));
  for (const auto& mf : data.fields)
    if (mf.mean.values.size() != data.xs.size())
      throw std::runtime_error("read_snapshots_csv: ragged snapshot blocks");
  return data;
}

void write_series_csv(const std::string& path, const Metadata& meta,
                      const std::vector<DecayPoint>& series) {
  auto out = open_out(path);
  write_metadata(out, meta);
  out << "t,value,stderr\n";
  for (const auto& p : series)
    out << format_double(p.t) << ',' << format_double(p.value) << ','
        << format_double(p.std_error) << "\n";
}

std::vector<DecayPoint> read_series_csv(const std::string& path, Metadata* meta) {
  auto in = open_in(path);
  const Metadata m = read_metadata(in);
  if (meta) *meta = m;
  std::string line;
  std::getline(in, line);
  if (trim(line) != "t,value,stderr")
    throw std::runtime_error("read_series_csv: unexpected header in " + path);
  std::vector<DecayPoint> series;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 3) throw std::runtime_error("read_series_csv: malformed row");
    series.push_back({parse_double(cols[0]), parse_double(cols[1]), parse_double(cols[2])});
  }
  return series;
}

void write_weight_table_csv(const std::string& path, const WeightTable& table) {
  auto out = open_out(path);
  Metadata meta;
  meta.set("m", static_cast<long>(table.m));
  meta.set("alpha", table.alpha);
  meta.set("tolerance", table.tolerance);
  meta.set("c_zero", table.c_zero);
  write_metadata(out, meta);
  out << "y,c_value\n";
  for (std::size_t i = 0; i < table.y_nodes.size(); ++i)
    out << format_double(table.y_nodes[i]) << ',' << format_double(table.c_values[i]) << "\n";
}

WeightTable read_weight_table_csv(const std::string& path) {
  auto in = open_in(path);
  const Metadata meta = read_metadata(in);
  WeightTable table;
  const auto need = [&](const char* key) {
    const std::string* v = meta.find(key);
    if (!v) throw std::runtime_error("read_weight_table_csv: missing metadata key " +
                                     std::string(key));
    return *v;
  };
  table.m = static_cast<int>(std::stol(need("m")));
  table.alpha = parse_double(need("alpha"));
  table.tolerance = parse_double(need("tolerance"));
  table.c_zero = parse_double(need("c_zero"));
  std::string line;
  std::getline(in, line);
  if (trim(line) != "y,c_value")
    throw std::runtime_error("read_weight_table_csv: unexpected header in " + path);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 2) throw std::runtime_error("read_weight_table_csv: malformed row");
    table.y_nodes.push_back(parse_double(cols[0]));
    table.c_values.push_back(parse_double(cols[1]));
  }
  return table;
}

void write_comparison_csv(const std::string& path, const Metadata& meta,
                          const ComparisonReport& report) {
  auto out = open_out(path);
  write_metadata(out, meta);
  out << "t,sup_discrepancy,l2_discrepancy,pooled_stderr,pass\n";
  for (const auto& row : report.rows)
    out << format_double(row.t) << ',' << format_double(row.sup_discrepancy) << ','
        << format_double(row.l2_discrepancy) << ',' << format_double(row.pooled_stderr) << ','
        << (row.pass ? 1 : 0) << "\n";
}

void write_conservation_csv(const std::string& path, const Metadata& meta,
                            const std::vector<ConservationRow>& rows) {
  auto out = open_out(path);
  write_metadata(out, meta);
  out << "t,l2,rel_drift,sup_exact,max_grid,shift,support_interior\n";
  for (const auto& row : rows)
    out << format_double(row.t) << ',' << format_double(row.l2) << ','
        << format_double(row.rel_drift) << ',' << format_double(row.sup_exact) << ','
        << format_double(row.max_grid) << ',' << format_double(row.shift) << ','
        << (row.support_interior ? 1 : 0) << "\n";
}

void write_fit_report_csv(const std::string& path, const Metadata& meta, const DecayFit& fit) {
  auto out = open_out(path);
  write_metadata(out, meta);
  out << "beta,exponent,residual_error,t_lo,t_hi,mode,n_points\n";
  out << format_double(fit.beta) << ',' << format_double(fit.exponent) << ','
      << format_double(fit.residual_error) << ',' << format_double(fit.t_lo) << ','
      << format_double(fit.t_hi) << ','
      << (fit.mode == FitMode::free_exponent ? "free" : "fixed") << ',' << fit.n_points << "\n";
}

std::string fit_summary_text(const DecayFit& fit, const LogLogTable& table) {
  std::ostringstream out;
  out << "power-law fit over t in [" << format_double(fit.t_lo) << ", "
      << format_double(fit.t_hi) << "] (" << fit.n_points << " points, "
      << (fit.mode == FitMode::free_exponent ? "free" : "fixed") << " exponent)\n";
  out << "  value ~ " << format_double(fit.beta) << " * t^(" << format_double(fit.exponent)
      << ")\n";
  out << "  log-space residual RMS = " << format_double(fit.residual_error) << "\n";
  if (!table.tail_t.empty())
    out << "  tail [" << format_double(table.tail_lo) << ", " << format_double(table.tail_hi)
        << "] abs residual range = [" << format_double(table.tail_residual_min) << ", "
        << format_double(table.tail_residual_max)
        << "], rms = " << format_double(table.tail_residual_rms) << "\n";
  return out.str();
}

void write_loglog_csv(const std::string& path, const Metadata& meta, const LogLogTable& table) {
  auto out = open_out(path);
  write_metadata(out, meta);
  out << "log_t,log_value,log_fit\n";
  for (std::size_t i = 0; i < table.t.size(); ++i)
    out << format_double(table.log_t[i]) << ',' << format_double(table.log_value[i]) << ','
        << format_double(table.log_fit[i]) << "\n";
  out << "\n";
  out << "tail_t,abs_residual\n";
  for (std::size_t i = 0; i < table.tail_t.size(); ++i)
    out << format_double(table.tail_t[i]) << ',' << format_double(table.tail_abs_residual[i])
        << "\n";
}

void write_gnuplot_script(const std::string& path, const std::string& series_csv,
                          const DecayFit& fit) {
  auto out = open_out(path);
  out << "# gnuplot script: decay of the averaged solution at the probe point\n";
  out << "set datafile separator ','\n";
  out << "set datafile commentschars '#'\n";
  out << "beta = " << format_double(fit.beta) << "\n";
  out << "expo = " << format_double(fit.exponent) << "\n";
  out << "set terminal pngcairo size 900,600\n";
  out << "set output 'decay.png'\n";
  out << "set xlabel 't'\nset ylabel 'mean value at probe'\n";
  out << "plot '" << series_csv << "' skip 1 using 1:2 with lines title 'Monte Carlo mean', \\\n";
  out << "     beta*x**expo title sprintf('%.4g t^{%.4g}', beta, expo)\n";
  out << "set output 'decay_loglog.png'\n";
  out << "set logscale xy\n";
  out << "set xrange [" << format_double(std::max(1e-3, fit.t_lo / 4.0)) << ":*]\n";
  out << "replot\n";
}

}  // namespace levy_transport
