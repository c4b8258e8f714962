// Command-line front end: construction, verification, certification and
// cross-section emission. Heavy lifting lives in the library.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ell4/certificates.hpp"
#include "ell4/gram.hpp"
#include "ell4/io.hpp"
#include "ell4/membership.hpp"
#include "ell4/pseudomoments.hpp"
#include "ell4/witnesses.hpp"

using namespace ell4;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;        // error or Inconclusive
constexpr int kExitNonMember = 2;   // verified NonMember / violation

double default_tol() {
  if (const char* env = std::getenv("ELLIPTOPE4_TOL")) {
    double t = std::atof(env);
    if (t > 0) return t;
  }
  return 1e-8;
}

VectorSystem load_frame(const std::string& path) { return read_vector_system(path); }

int run_verify_degree4(const std::string& path, double tol) {
  Degree4Moments m = read_degree4(path);
  Degree4Validation rep = validate_degree4(m, tol);
  std::cout << "psd:          " << (rep.psd.pass ? "pass" : "FAIL")
            << "  (min eigenvalue " << rep.min_eigenvalue << ")\n";
  std::cout << "marginals:    " << (rep.marginal.pass ? "pass" : "FAIL") << "  (violation "
            << rep.marginal.violation << ")\n";
  std::cout << "unit diag:    " << (rep.unit_diagonal.pass ? "pass" : "FAIL") << "  (violation "
            << rep.unit_diagonal.violation << ")\n";
  std::cout << "permutation:  " << (rep.permutation.pass ? "pass" : "FAIL") << "  (violation "
            << rep.permutation.violation << ")\n";
  return rep.all_pass() ? kExitOk : kExitNonMember;
}

int run_verify_witness(const std::string& path, double tol) {
  BlockWitness w = read_witness(path);
  WitnessValidation rep = validate_witness(w, tol);
  std::cout << "psd:            " << (rep.psd.pass ? "pass" : "FAIL") << "  (min eigenvalue "
            << rep.min_eigenvalue << ")\n";
  std::cout << "diag blocks:    " << (rep.diag_identity.pass ? "pass" : "FAIL") << "  (violation "
            << rep.diag_identity.violation << ")\n";
  std::cout << "off symmetry:   " << (rep.off_symmetry.pass ? "pass" : "FAIL") << "  (violation "
            << rep.off_symmetry.violation << ")\n";
  std::cout << "block norms:    " << (rep.block_norm_bound.pass ? "pass" : "FAIL") << "  (max "
            << rep.max_block_norm << ")\n";
  std::cout << "overall norm:   " << (rep.norm_bound.pass ? "pass" : "FAIL") << "  ("
            << rep.spectral_norm << " <= N)\n";
  return rep.all_pass() ? kExitOk : kExitNonMember;
}

int run_verify_schlafli(const std::string& bundle_out, const std::string& cert_out) {
  VectorSystem sys = etf_28_7();
  VectorSystem canon = canonicalize_signs(sys, 27);
  auto [g27, par] = etf_to_srg(canon, 27);
  std::cout << "sign graph: srg(" << par.v << ", " << par.k << ", " << par.lambda << ", "
            << par.mu << ")\n";
  Graph g28 = augment_with_anchor(g27);
  SchlafliCertificate cert = build_schlafli_certificate(g28);
  std::cout << "certificate assembled: " << cert.A.rows << " x " << cert.A.cols << "\n";
  SchlafliProof proof = verify_schlafli_certificate(cert);
  std::cout << "collapse: constant " << to_string(proof.constant)
            << ", pair classes exact, 4-sets zero\n";
  std::cout << "exact psd: rank " << proof.rank << ", d_min " << to_string(proof.d_min) << "\n";

  RationalMatrix Z = etf_gram_from_graph(g28);
  std::vector<int> id(28);
  for (int i = 0; i < 28; ++i) id[i] = i;
  InequalityReport ineq = evaluate_schlafli(Z, id, cert);
  std::cout << "inequality at the ETF Gram: lhs " << to_string(ineq.lhs) << " vs rhs "
            << to_string(ineq.rhs) << (ineq.satisfied ? "" : " (violated, as it must be)") << "\n";
  TriangleReport tri = evaluate_triangles(Z);
  std::cout << "triangle inequalities at the ETF Gram: worst " << to_string(tri.worst_value)
            << (tri.all_satisfied ? " (all satisfied)" : " (violated)") << "\n";

  if (!cert_out.empty()) write_certificate(cert, cert_out);
  if (!bundle_out.empty()) write_proof_bundle(proof, cert, bundle_out);
  return (proof.psd && proof.collapse_ok) ? kExitOk : kExitNonMember;
}

int run_membership(const std::string& set, const std::string& frame_path,
                   const std::string& matrix_path, double tol, int max_iter) {
  MembershipVerdict v;
  if (set == "e2" || set == "cut") {
    DenseMatrix X;
    if (!matrix_path.empty()) {
      X = read_dense_csv(matrix_path);
    } else if (!frame_path.empty()) {
      X = load_frame(frame_path).gram();
    } else {
      throw Error("check membership: need --matrix or --frame");
    }
    v = (set == "e2") ? e2_membership(X, tol) : cut_membership(X, std::max(tol, 1e-7), max_iter);
  } else if (set == "e4") {
    VectorSystem sys;
    if (!frame_path.empty()) {
      sys = load_frame(frame_path);
    } else if (!matrix_path.empty()) {
      DenseMatrix X = read_dense_csv(matrix_path);
      DenseMatrix V = gram_factor(X, 1e-9);
      sys = VectorSystem{X.rows, V.rows, V, std::nullopt};
    } else {
      throw Error("check membership: need --matrix or --frame");
    }
    v = e4_feasibility(sys, tol, max_iter);
  } else {
    throw Error("check membership: --set must be cut, e2 or e4");
  }

  switch (v.status) {
    case Membership::Member:
      std::cout << "Member  (iterations " << v.iterations << ")\n";
      return kExitOk;
    case Membership::NonMember:
      std::cout << "NonMember  (gap " << v.gap << ", iterations " << v.iterations << ")\n";
      return kExitNonMember;
    default:
      std::cout << "Inconclusive  (residual " << v.residual << " after " << v.iterations
                << " iterations)\n";
      return kExitFail;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degree 4 elliptope toolkit"};
  app.require_subcommand(1);
  double tol = default_tol();
  int max_iter = 5000;

  // frame
  auto* frame = app.add_subcommand("frame", "construct vector systems");
  frame->require_subcommand(1);
  int simplex_n = 5;
  std::string out_path;
  auto* fsimplex = frame->add_subcommand("simplex", "simplex ETF of N vectors in R^{N-1}");
  fsimplex->add_option("--n", simplex_n, "number of vectors")->required();
  fsimplex->add_option("--out,-o", out_path, "output JSON path")->required();
  auto* fetf = frame->add_subcommand("etf287", "the 28-vector ETF in R^7");
  fetf->add_option("--out,-o", out_path, "output JSON path")->required();

  // moments
  auto* moments = app.add_subcommand("moments", "construct pseudomoment matrices");
  moments->require_subcommand(1);
  std::string frame_path, moments_path;
  auto* metf = moments->add_subcommand("etf", "degree 4 extension of an ETF Gram matrix");
  metf->add_option("--frame", frame_path, "frame JSON")->required();
  metf->add_option("--out,-o", out_path, "output CSV path")->required();
  int lau_n = 5, lau_d = 4;
  auto* mlau = moments->add_subcommand("laurent", "parity pseudomoment matrix");
  mlau->add_option("--n", lau_n, "N (odd)")->required();
  mlau->add_option("--d", lau_d, "degree (even)")->required();
  mlau->add_option("--out,-o", out_path, "output CSV path")->required();

  // witness
  auto* witness = app.add_subcommand("witness", "Gram-vector block witnesses");
  witness->require_subcommand(1);
  auto* wfrom = witness->add_subcommand("from-moments", "convert pseudomoments to a witness");
  wfrom->add_option("--moments", moments_path, "degree 4 CSV")->required();
  wfrom->add_option("--frame", frame_path, "frame JSON")->required();
  wfrom->add_option("--out,-o", out_path, "output CSV path")->required();
  auto* wetf = witness->add_subcommand("etf", "closed-form ETF witness");
  wetf->add_option("--frame", frame_path, "frame JSON")->required();
  wetf->add_option("--out,-o", out_path, "output CSV path")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "validate artifacts");
  verify->require_subcommand(1);
  std::string target_path, bundle_out, cert_out;
  auto* vdeg = verify->add_subcommand("degree4", "degree 4 pseudomoment conditions");
  vdeg->add_option("path", target_path, "degree 4 CSV")->required();
  vdeg->add_option("--tol", tol, "tolerance");
  auto* vwit = verify->add_subcommand("witness", "block witness conditions");
  vwit->add_option("path", target_path, "witness CSV")->required();
  vwit->add_option("--tol", tol, "tolerance");
  auto* vsch = verify->add_subcommand("schlafli", "build and exactly verify the certificate");
  vsch->add_option("--out,-o", bundle_out, "proof bundle JSON path");
  vsch->add_option("--cert-out", cert_out, "certificate CSV path");

  // check membership
  auto* check = app.add_subcommand("check", "membership oracles");
  check->require_subcommand(1);
  std::string set_name, matrix_path;
  auto* cmem = check->add_subcommand("membership", "decide membership for cut/e2/e4");
  cmem->add_option("--set", set_name, "cut | e2 | e4")->required();
  cmem->add_option("--frame", frame_path, "frame JSON");
  cmem->add_option("--matrix", matrix_path, "Gram matrix CSV");
  cmem->add_option("--tol", tol, "tolerance");
  cmem->add_option("--max-iter", max_iter, "iteration cap");

  // cross-section
  int cs_n = 5, cs_angles = 64;
  uint64_t cs_seed = 1;
  auto* csec = app.add_subcommand("cross-section", "boundary radii of C, E4, E2 on a random 2-plane");
  csec->add_option("--n", cs_n, "matrix size (5)");
  csec->add_option("--seed", cs_seed, "direction seed");
  csec->add_option("--angles", cs_angles, "ray count");
  csec->add_option("--out,-o", out_path, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (fsimplex->parsed()) {
      write_vector_system(simplex_etf(simplex_n), out_path);
      return kExitOk;
    }
    if (fetf->parsed()) {
      write_vector_system(etf_28_7(), out_path);
      return kExitOk;
    }
    if (metf->parsed()) {
      write_degree4(etf_degree4(load_frame(frame_path)), out_path);
      return kExitOk;
    }
    if (mlau->parsed()) {
      TruncatedMoments t = laurent_moments(lau_n, lau_d);
      write_matrix_csv(t.Z, out_path);
      return kExitOk;
    }
    if (wfrom->parsed()) {
      BlockWitness w = moments_to_witness(read_degree4(moments_path), load_frame(frame_path), tol);
      write_witness(w, out_path);
      return kExitOk;
    }
    if (wetf->parsed()) {
      write_witness(etf_witness(load_frame(frame_path)), out_path);
      return kExitOk;
    }
    if (vdeg->parsed()) return run_verify_degree4(target_path, tol);
    if (vwit->parsed()) return run_verify_witness(target_path, tol);
    if (vsch->parsed()) return run_verify_schlafli(bundle_out, cert_out);
    if (cmem->parsed()) return run_membership(set_name, frame_path, matrix_path, tol, max_iter);
    if (csec->parsed()) {
      auto [A1, A2] = random_directions(cs_n, cs_seed);
      CrossSection cs = cross_section(cs_n, A1, A2, cs_angles);
      write_cross_section_csv(cs, out_path);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  std::cerr << "error: no subcommand dispatched\n";
  return kExitFail;
}
