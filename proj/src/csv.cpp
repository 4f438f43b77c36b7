#include "meds/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "meds/errors.hpp"

namespace meds {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  return in;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& s, const std::string& path) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw IoError("bad number '" + s + "' in " + path);
  return v;
}

long parse_long(const std::string& s, const std::string& path) {
  long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw IoError("bad integer '" + s + "' in " + path);
  return v;
}

}  // namespace

void write_waveform_csv(const std::string& path, const DenseWaveform& w) {
  auto out = open_out(path);
  out << "t,value\n";
  for (std::size_t i = 0; i < w.size(); ++i)
    out << format_double(w.time_at(i)) << ',' << format_double(w.samples[i]) << '\n';
}

DenseWaveform read_waveform_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != 2) throw IoError("expected 2 columns in " + path);
    t.push_back(parse_double(cells[0], path));
    v.push_back(parse_double(cells[1], path));
  }
  if (t.size() < 2) throw IoError("waveform needs at least two samples: " + path);
  DenseWaveform w;
  w.t0 = t.front();
  w.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(w.dt > 0.0)) throw IoError("waveform grid not increasing: " + path);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(t[i] - w.time_at(i)) > 1e-9 * std::max(1.0, std::abs(t[i])))
      throw IoError("waveform grid not uniform: " + path);
  }
  w.samples = std::move(v);
  return w;
}

void write_triggers_csv(const std::string& path, const TriggerTimes& trig) {
  auto out = open_out(path);
  out << "k,t\n";
  for (std::size_t k = 0; k < trig.t.size(); ++k)
    out << k << ',' << format_double(trig.t[k]) << '\n';
}

TriggerTimes read_triggers_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  TriggerTimes trig;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != 2) throw IoError("expected 2 columns in " + path);
    trig.t.push_back(parse_double(cells[1], path));
  }
  if (trig.t.size() < 2) throw IoError("trigger file needs at least two times: " + path);
  for (std::size_t i = 1; i < trig.t.size(); ++i) {
    if (!(trig.t[i] > trig.t[i - 1]))
      throw IoError("trigger times not strictly increasing: " + path);
  }
  return trig;
}

void write_folds_csv(const std::string& path, const FoldRecord& folds) {
  auto out = open_out(path);
  out << "tau,s\n";
  for (std::size_t r = 0; r < folds.size(); ++r)
    out << format_double(folds.tau[r]) << ',' << folds.sign[r] << '\n';
}

FoldRecord read_folds_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty file: " + path);
  FoldRecord folds;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != 2) throw IoError("expected 2 columns in " + path);
    folds.tau.push_back(parse_double(cells[0], path));
    folds.sign.push_back(static_cast<int>(parse_long(cells[1], path)));
  }
  folds.validate();
  return folds;
}

void write_detected_folds_csv(const std::string& path,
                              const std::vector<DetectedFold>& folds) {
  auto out = open_out(path);
  out << "tau_est,s_est,k_m,k_M\n";
  for (const auto& f : folds)
    out << format_double(f.tau) << ',' << f.sign << ',' << f.k_m << ',' << f.k_M << '\n';
}

}  // namespace meds
