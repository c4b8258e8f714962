#include "ell4/io.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ell4 {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  if (path.empty()) throw Error("io: empty output path");
  std::ofstream out(path);
  if (!out) throw Error("io: cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  if (path.empty()) throw Error("io: empty input path");
  std::ifstream in(path);
  if (!in) throw Error("io: cannot open for reading: " + path);
  return in;
}

std::vector<std::vector<std::string>> read_csv_cells(const std::string& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double parse_double(const std::string& s) {
  double x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc()) throw Error("io: bad float token: " + s);
  return x;
}

}  // namespace

void write_matrix_csv(const DenseMatrix& m, const std::string& path) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const RationalMatrix& m, const std::string& path) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << to_string(m(i, j));
    }
    out << '\n';
  }
}

DenseMatrix read_dense_csv(const std::string& path) {
  auto rows = read_csv_cells(path);
  if (rows.empty()) throw Error("io: empty matrix file: " + path);
  DenseMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw Error("io: ragged CSV: " + path);
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = parse_double(rows[i][j]);
  }
  return m;
}

RationalMatrix read_rational_csv(const std::string& path) {
  auto rows = read_csv_cells(path);
  if (rows.empty()) throw Error("io: empty matrix file: " + path);
  RationalMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw Error("io: ragged CSV: " + path);
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = parse_rational(rows[i][j]);
  }
  return m;
}

bool csv_looks_rational(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find('/') != std::string::npos) return true;
    if (line.find('.') != std::string::npos || line.find('e') != std::string::npos) return false;
  }
  return false;  // bare integers round-trip either way
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

void write_vector_system(const VectorSystem& sys, const std::string& path) {
  ordered_json j;
  j["N"] = sys.N;
  j["r"] = sys.r;
  std::vector<std::vector<double>> V(sys.r, std::vector<double>(sys.N));
  for (int p = 0; p < sys.r; ++p)
    for (int i = 0; i < sys.N; ++i) V[p][i] = sys.V(p, i);
  j["V"] = V;
  if (sys.gram_exact) {
    std::vector<std::vector<std::string>> G(sys.N, std::vector<std::string>(sys.N));
    for (int i = 0; i < sys.N; ++i)
      for (int k = 0; k < sys.N; ++k) G[i][k] = to_string((*sys.gram_exact)(i, k));
    j["gram_exact"] = G;
  }
  open_out(path) << j.dump(1) << '\n';
}

VectorSystem read_vector_system(const std::string& path) {
  json j = json::parse(open_in(path));
  VectorSystem sys;
  sys.N = j.at("N").get<int>();
  sys.r = j.at("r").get<int>();
  sys.V = DenseMatrix(sys.r, sys.N);
  auto V = j.at("V");
  for (int p = 0; p < sys.r; ++p)
    for (int i = 0; i < sys.N; ++i) sys.V(p, i) = V.at(p).at(i).get<double>();
  if (j.contains("gram_exact")) {
    RationalMatrix G(sys.N, sys.N);
    for (int i = 0; i < sys.N; ++i)
      for (int k = 0; k < sys.N; ++k)
        G(i, k) = parse_rational(j["gram_exact"].at(i).at(k).get<std::string>());
    sys.gram_exact = std::move(G);
  }
  return sys;
}

void write_graph(const Graph& g, const std::string& path) {
  ordered_json j;
  j["n"] = g.n;
  std::vector<std::vector<int>> edges;
  for (auto [a, b] : g.edges) edges.push_back({a + 1, b + 1});
  j["edges"] = edges;
  open_out(path) << j.dump(1) << '\n';
}

Graph read_graph(const std::string& path) {
  json j = json::parse(open_in(path));
  Graph g;
  g.n = j.at("n").get<int>();
  for (auto& e : j.at("edges")) {
    int a = e.at(0).get<int>() - 1, b = e.at(1).get<int>() - 1;
    if (a >= b || a < 0 || b >= g.n) throw Error("io: bad edge in graph file");
    g.edges.emplace_back(a, b);
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

void write_degree4(const Degree4Moments& m, const std::string& csv_path) {
  if (m.exact)
    write_matrix_csv(*m.exact, csv_path);
  else
    write_matrix_csv(m.Y, csv_path);
  ordered_json j;
  j["N"] = m.N;
  j["indexing"] = "pair-major";
  open_out(sidecar_path(csv_path)) << j.dump(1) << '\n';
}

Degree4Moments read_degree4(const std::string& csv_path) {
  json j = json::parse(open_in(sidecar_path(csv_path)));
  Degree4Moments m;
  m.N = j.at("N").get<int>();
  if (csv_looks_rational(csv_path)) {
    m.exact = read_rational_csv(csv_path);
    m.Y = to_dense(*m.exact);
  } else {
    m.Y = read_dense_csv(csv_path);
  }
  if (m.Y.rows != m.N * m.N) throw Error("io: degree4 CSV dimension mismatch with sidecar N");
  return m;
}

void write_witness(const BlockWitness& w, const std::string& csv_path) {
  write_matrix_csv(w.M, csv_path);
  ordered_json j;
  j["N"] = w.layout.N;
  j["r"] = w.layout.r;
  open_out(sidecar_path(csv_path)) << j.dump(1) << '\n';
}

BlockWitness read_witness(const std::string& csv_path) {
  json j = json::parse(open_in(sidecar_path(csv_path)));
  BlockWitness w;
  w.layout.N = j.at("N").get<int>();
  w.layout.r = j.at("r").get<int>();
  w.M = read_dense_csv(csv_path);
  if (w.M.rows != w.layout.dim()) throw Error("io: witness CSV dimension mismatch with sidecar");
  return w;
}

void write_cuts(const CutDecomposition& dec, const std::string& path) {
  ordered_json j;
  j["weights"] = dec.weights;
  j["signs"] = dec.signs;
  open_out(path) << j.dump(1) << '\n';
}

CutDecomposition read_cuts(const std::string& path) {
  json j = json::parse(open_in(path));
  CutDecomposition dec;
  dec.weights = j.at("weights").get<std::vector<double>>();
  dec.signs = j.at("signs").get<std::vector<std::vector<int>>>();
  for (auto& s : dec.signs)
    for (int x : s)
      if (x != 1 && x != -1) throw Error("io: cut signs must be +-1");
  return dec;
}

void write_certificate(const SchlafliCertificate& cert, const std::string& csv_path) {
  write_matrix_csv(cert.A, csv_path);
  ordered_json j;
  j["constants"] = {{"gamma1", to_string(cert.gamma1)},
                    {"gamma2", to_string(cert.gamma2)},
                    {"kappa1", to_string(cert.kappa1)},
                    {"kappa2", to_string(cert.kappa2)}};
  j["graph_hash"] = graph_hash(cert.g);
  open_out(sidecar_path(csv_path)) << j.dump(1) << '\n';
}

void write_proof_bundle(const SchlafliProof& proof, const SchlafliCertificate& cert,
                        const std::string& path, bool with_timestamp) {
  ordered_json j;
  j["psd"] = proof.psd;
  j["d_min"] = to_string(proof.d_min);
  j["rank"] = proof.rank;
  ordered_json col;
  col["constant"] = to_string(proof.constant);
  col["pairs"] = "-sgn(Z_ij) for all i<j";
  col["four_sets"] = "0";
  j["collapse"] = col;
  j["graph_hash"] = graph_hash(cert.g);
  if (with_timestamp) {
    auto now = std::chrono::system_clock::now();
    j["timestamp"] =
        static_cast<long long>(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
  }
  open_out(path) << j.dump(1) << '\n';
}

void write_cross_section_csv(const CrossSection& cs, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "theta,radius_cut,radius_e4,radius_e2\n";
  for (size_t k = 0; k < cs.theta.size(); ++k)
    out << format_double(cs.theta[k]) << ',' << format_double(cs.radius_cut[k]) << ','
        << format_double(cs.radius_e4[k]) << ',' << format_double(cs.radius_e2[k]) << '\n';
}

}  // namespace ell4
