#pragma once

#include <string>

#include "ell4/certificates.hpp"
#include "ell4/frames.hpp"
#include "ell4/membership.hpp"
#include "ell4/pseudomoments.hpp"
#include "ell4/separability.hpp"
#include "ell4/witnesses.hpp"

namespace ell4 {

// Matrix CSV: one row per line, comma separated. Floats are written as
// shortest round-trip decimals, rationals as "p/q" (q > 0, gcd 1).
void write_matrix_csv(const DenseMatrix& m, const std::string& path);
void write_matrix_csv(const RationalMatrix& m, const std::string& path);
DenseMatrix read_dense_csv(const std::string& path);
RationalMatrix read_rational_csv(const std::string& path);
bool csv_looks_rational(const std::string& path);

std::string format_double(double x);

// VectorSystem JSON: {"N":..., "r":..., "V": [[...]], "gram_exact": [["p/q",...]]}
void write_vector_system(const VectorSystem& sys, const std::string& path);
VectorSystem read_vector_system(const std::string& path);

// Graph JSON: {"n":..., "edges": [[i,j],...]} with 1-based vertices, i < j.
void write_graph(const Graph& g, const std::string& path);
Graph read_graph(const std::string& path);

// Degree4Moments CSV plus sidecar {"N":..., "indexing":"pair-major"}.
void write_degree4(const Degree4Moments& m, const std::string& csv_path);
Degree4Moments read_degree4(const std::string& csv_path);

// BlockWitness CSV plus sidecar {"N":..., "r":...}.
void write_witness(const BlockWitness& w, const std::string& csv_path);
BlockWitness read_witness(const std::string& csv_path);

// CutDecomposition JSON: {"weights": [...], "signs": [[+-1,...],...]}.
void write_cuts(const CutDecomposition& dec, const std::string& path);
CutDecomposition read_cuts(const std::string& path);

// Certificate CSV + metadata, and the verification proof bundle.
void write_certificate(const SchlafliCertificate& cert, const std::string& csv_path);
void write_proof_bundle(const SchlafliProof& proof, const SchlafliCertificate& cert,
                        const std::string& path, bool with_timestamp = true);

void write_cross_section_csv(const CrossSection& cs, const std::string& path);

std::string sidecar_path(const std::string& csv_path);

}  // namespace ell4
