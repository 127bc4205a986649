#include "speclab/io.hpp"

#include <json.hpp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace speclab::io {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}
}  // namespace

std::string base64_encode(const unsigned char* data, std::size_t len) {
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    const unsigned b0 = data[i];
    const unsigned b1 = i + 1 < len ? data[i + 1] : 0;
    const unsigned b2 = i + 2 < len ? data[i + 2] : 0;
    out.push_back(kB64[b0 >> 2]);
    out.push_back(kB64[((b0 & 3u) << 4) | (b1 >> 4)]);
    out.push_back(i + 1 < len ? kB64[((b1 & 15u) << 2) | (b2 >> 6)] : '=');
    out.push_back(i + 2 < len ? kB64[b2 & 63u] : '=');
  }
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  int acc = 0, bits = 0;
  for (char c : text) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    const int v = b64_value(c);
    if (v < 0) throw std::invalid_argument("base64_decode: invalid character");
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
    }
  }
  return out;
}

std::string encode_doubles(const std::vector<double>& v) {
  static_assert(sizeof(double) == 8);
  return base64_encode(reinterpret_cast<const unsigned char*>(v.data()), v.size() * 8);
}

std::vector<double> decode_doubles(const std::string& b64) {
  const std::vector<unsigned char> bytes = base64_decode(b64);
  if (bytes.size() % 8 != 0) throw std::invalid_argument("decode_doubles: bad payload size");
  std::vector<double> out(bytes.size() / 8);
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

std::string encode_complex(const Eigen::VectorXcd& v) {
  std::vector<double> flat(static_cast<std::size_t>(v.size()) * 2);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    flat[static_cast<std::size_t>(2 * i)] = v(i).real();
    flat[static_cast<std::size_t>(2 * i + 1)] = v(i).imag();
  }
  return encode_doubles(flat);
}

Eigen::VectorXcd decode_complex(const std::string& b64) {
  const std::vector<double> flat = decode_doubles(b64);
  if (flat.size() % 2 != 0) throw std::invalid_argument("decode_complex: odd payload");
  Eigen::VectorXcd out(static_cast<Eigen::Index>(flat.size() / 2));
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out(i) = cplx(flat[static_cast<std::size_t>(2 * i)], flat[static_cast<std::size_t>(2 * i + 1)]);
  return out;
}

std::string mask_to_json(const ObservationSet& obs) {
  json j;
  j["n_side"] = obs.grid.n_side;
  j["side_length"] = obs.grid.side_length;
  json runs = json::array();
  int i = 0;
  const int nn = static_cast<int>(obs.mask.size());
  while (i < nn) {
    if (obs.mask[static_cast<std::size_t>(i)]) {
      int start = i;
      while (i < nn && obs.mask[static_cast<std::size_t>(i)]) ++i;
      runs.push_back(json::array({start, i - start}));
    } else {
      ++i;
    }
  }
  j["runs"] = runs;
  return j.dump();
}

ObservationSet mask_from_json(const std::string& text) {
  const json j = json::parse(text);
  const TorusGrid grid = build_grid(j.at("n_side").get<int>(), j.at("side_length").get<double>());
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(grid.cell_count()), 0);
  for (const auto& run : j.at("runs")) {
    const int start = run.at(0).get<int>();
    const int len = run.at(1).get<int>();
    for (int i = start; i < start + len; ++i) mask[static_cast<std::size_t>(i)] = 1;
  }
  return make_observation(grid, std::move(mask));
}

std::string dataset_to_json(const SpectralDataset& ds) {
  json j;
  j["observation"] = json::parse(mask_to_json(ds.observation));
  j["orthonormalized"] = ds.orthonormalized;
  json entries = json::array();
  for (const SpectralEntry& e : ds.entries) {
    json je;
    je["index"] = e.index;
    je["eigenvalue"] = e.eigenvalue;
    je["restriction"] = encode_complex(e.restriction);
    entries.push_back(std::move(je));
  }
  j["entries"] = entries;
  return j.dump(2);
}

SpectralDataset dataset_from_json(const std::string& text) {
  const json j = json::parse(text);
  SpectralDataset ds;
  ds.observation = mask_from_json(j.at("observation").dump());
  ds.orthonormalized = j.at("orthonormalized").get<bool>();
  for (const auto& je : j.at("entries")) {
    SpectralEntry e;
    e.index = je.at("index").get<int>();
    e.eigenvalue = je.at("eigenvalue").get<double>();
    e.restriction = decode_complex(je.at("restriction").get<std::string>());
    ds.entries.push_back(std::move(e));
  }
  return ds;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_field_csv(const std::filesystem::path& path, const RealField& f) {
  std::ostringstream os;
  const int n = f.grid.n_side;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (ix > 0) os << ',';
      os << fmt(f[static_cast<std::size_t>(iy * n + ix)]);
    }
    os << '\n';
  }
  write_text(path, os.str());
}

void write_field_csv(const std::filesystem::path& path, const ComplexField& f) {
  std::ostringstream os;
  const int n = f.grid.n_side;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (ix > 0) os << ',';
      const cplx v = f[static_cast<std::size_t>(iy * n + ix)];
      os << fmt(v.real()) << ',' << fmt(v.imag());
    }
    os << '\n';
  }
  write_text(path, os.str());
}

RealField read_field_csv(const std::filesystem::path& path, const TorusGrid& grid) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open field csv: " + path.string());
  RealField f(grid);
  std::string line;
  int iy = 0;
  while (std::getline(is, line) && iy < grid.n_side) {
    std::istringstream ls(line);
    std::string tok;
    int ix = 0;
    while (std::getline(ls, tok, ',') && ix < grid.n_side) {
      f[static_cast<std::size_t>(iy * grid.n_side + ix)] = std::stod(tok);
      ++ix;
    }
    ++iy;
  }
  return f;
}

void write_recording(const std::filesystem::path& prefix, const PassiveRecording& rec) {
  const bool complex_vals = rec.equation == Equation::schrodinger;
  std::ostringstream os;
  os << "t";
  for (Eigen::Index c = 0; c < rec.values.cols(); ++c) {
    if (complex_vals)
      os << ",cell_" << c << "_re,cell_" << c << "_im";
    else
      os << ",cell_" << c;
  }
  os << '\n';
  for (Eigen::Index i = 0; i < rec.values.rows(); ++i) {
    os << fmt(rec.times[static_cast<std::size_t>(i)]);
    for (Eigen::Index c = 0; c < rec.values.cols(); ++c) {
      const cplx v = rec.values(i, c);
      if (complex_vals)
        os << ',' << fmt(v.real()) << ',' << fmt(v.imag());
      else
        os << ',' << fmt(v.real());
    }
    os << '\n';
  }
  write_text(prefix.string() + ".csv", os.str());

  json j;
  j["equation"] = equation_name(rec.equation);
  j["sigma"] = rec.sigma;
  j["seed"] = rec.seed;
  j["dt"] = rec.dt;
  j["samples"] = rec.values.rows();
  j["mask"] = json::parse(mask_to_json(rec.observation));
  write_text(prefix.string() + ".json", j.dump(2));
}

PassiveRecording read_recording(const std::filesystem::path& prefix) {
  const json j = json::parse(read_text(prefix.string() + ".json"));
  PassiveRecording rec;
  rec.equation = equation_from_name(j.at("equation").get<std::string>());
  rec.sigma = j.at("sigma").get<double>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.dt = j.at("dt").get<double>();
  rec.observation = mask_from_json(j.at("mask").dump());

  std::ifstream is(prefix.string() + ".csv");
  if (!is) throw std::runtime_error("cannot open recording csv");
  std::string line;
  std::getline(is, line);  // header
  const bool complex_vals = rec.equation == Equation::schrodinger;
  std::vector<std::vector<cplx>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');
    rec.times.push_back(std::stod(tok));
    std::vector<cplx> row;
    while (std::getline(ls, tok, ',')) {
      if (complex_vals) {
        const double re = std::stod(tok);
        if (!std::getline(ls, tok, ','))
          throw std::runtime_error("read_recording: truncated complex pair");
        row.emplace_back(re, std::stod(tok));
      } else {
        row.emplace_back(std::stod(tok), 0.0);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_recording: empty recording");
  rec.values.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c)
      rec.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  return rec;
}

std::string sparsity_report_to_json(const SparsityReport& rep) {
  json j;
  j["uniform_gap"] = rep.uniform_gap;
  j["truncation_size"] = rep.truncation_size;
  j["empty_subset"] = rep.empty_subset;
  switch (rep.verdict) {
    case SparsityVerdict::sparse: j["verdict"] = "sparse"; break;
    case SparsityVerdict::not_sparse: j["verdict"] = "not_sparse"; break;
    default: j["verdict"] = "inconclusive"; break;
  }
  json est = json::array();
  for (const DensityEstimate& d : rep.density_estimates)
    est.push_back({{"window", d.window}, {"density", d.density}});
  j["density_estimates"] = est;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j.dump(2);
}

void write_interpolant_csv(const std::filesystem::path& path, const Interpolant& interp) {
  std::ostringstream os;
  os << "t,re,im\n";
  for (std::size_t i = 0; i < interp.t.size(); ++i)
    os << fmt(interp.t[i]) << ',' << fmt(interp.values(static_cast<Eigen::Index>(i)).real())
       << ',' << fmt(interp.values(static_cast<Eigen::Index>(i)).imag()) << '\n';
  write_text(path, os.str());
}

std::string match_result_to_json(const MatchResult& mr) {
  json j;
  j["eig_tol"] = mr.eig_tol;
  j["fun_tol"] = mr.fun_tol;
  json pairs = json::array();
  for (std::size_t i = 0; i < mr.pairs.size(); ++i) {
    json p;
    p["k"] = mr.pairs[i].first;
    p["b_k"] = mr.pairs[i].second;
    p["gauge_re"] = mr.gauges[i].real();
    p["gauge_im"] = mr.gauges[i].imag();
    p["discrepancy"] = mr.restriction_discrepancies[i];
    pairs.push_back(std::move(p));
  }
  j["pairs"] = pairs;
  j["unmatched_ds1"] = mr.unmatched_ds1;
  j["unmatched_ds2"] = mr.unmatched_ds2;
  return j.dump(2);
}

std::string modes_to_json(const std::vector<ModeEstimate>& modes, Equation eq) {
  json j;
  j["equation"] = equation_name(eq);
  json arr = json::array();
  for (const ModeEstimate& m : modes) {
    json jm;
    jm["rate_re"] = m.rate.real();
    jm["rate_im"] = m.rate.imag();
    jm["confidence"] = m.confidence;
    jm["accepted"] = m.accepted;
    jm["residue"] = encode_complex(m.residue);
    arr.push_back(std::move(jm));
  }
  j["modes"] = arr;
  return j.dump(2);
}

std::string wave_modes_to_json(const std::vector<WaveModeEstimate>& modes) {
  json j;
  j["equation"] = "wave";
  json arr = json::array();
  for (const WaveModeEstimate& m : modes) {
    json jm;
    jm["mu"] = m.mu;
    jm["confidence"] = m.confidence;
    jm["accepted"] = m.accepted;
    jm["residue_f"] = encode_complex(m.residue_f);
    jm["residue_h"] = encode_complex(m.residue_h);
    arr.push_back(std::move(jm));
  }
  j["modes"] = arr;
  return j.dump(2);
}

void write_recovery_result(const std::filesystem::path& dir, const RecoveryResult& res) {
  std::filesystem::create_directories(dir);
  write_field_csv(dir / "potential_estimate.csv", res.potential_estimate);

  {
    std::ostringstream os;
    const int n = res.potential_estimate.grid.n_side;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        if (ix > 0) os << ',';
        const std::size_t i = static_cast<std::size_t>(iy * n + ix);
        os << (i < res.recovered_mask.size() ? int(res.recovered_mask[i]) : 0);
      }
      os << '\n';
    }
    write_text(dir / "mask.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "iteration,misfit,data_misfit\n";
    for (std::size_t i = 0; i < res.misfit_history.size(); ++i)
      os << i << ',' << fmt(res.misfit_history[i]) << ','
         << fmt(i < res.data_misfit_history.size() ? res.data_misfit_history[i] : 0.0) << '\n';
    write_text(dir / "history.csv", os.str());
  }
  {
    json j;
    j["final_lambda"] = res.final_lambda;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["line_search_failed"] = res.line_search_failed;
    if (!res.note.empty()) j["note"] = res.note;
    json gauges = json::array();
    for (const cplx& g : res.gauges) gauges.push_back({{"re", g.real()}, {"im", g.imag()}});
    j["gauges"] = gauges;
    write_text(dir / "diagnostics.json", j.dump(2));
  }
  if (res.initial_f) write_field_csv(dir / "initial_f.csv", *res.initial_f);
  if (res.initial_h) write_field_csv(dir / "initial_h.csv", *res.initial_h);
}

}  // namespace speclab::io
