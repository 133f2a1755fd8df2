#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "tpsa/decompose.hpp"
#include "tpsa/errors.hpp"
#include "tpsa/randomgen.hpp"
#include "tpsa/series_ring.hpp"
#include "tpsa/textio.hpp"

namespace {

using namespace tpsa;

// An argument containing "->" is inline automorphism text; anything else is
// a path to read.
std::string read_input(const std::string& arg) {
  if (arg.find("->") != std::string::npos) return arg;
  std::ifstream in(arg, std::ios::binary);
  if (!in) throw IOError("cannot read '" + arg + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write '" + path + "'");
  out << data;
  out.flush();
  if (!out) throw IOError("failed while writing '" + path + "'");
}

struct ContextOpts {
  std::string ring_text;
  std::uint32_t nvars = 0;
  std::uint32_t prec = 0;

  SeriesContext context() const {
    if (nvars < 1) throw UsageError("-n must be at least 1");
    if (prec < 1) throw UsageError("-D must be at least 1");
    return {parse_ring_descriptor(ring_text), nvars, prec};
  }
};

void add_context_options(CLI::App* sub, ContextOpts& opts) {
  sub->add_option("--ring", opts.ring_text,
                  "coefficient ring: q, fp:<p>, or dual:<p>")
      ->required();
  sub->add_option("-n", opts.nvars, "number of variables")->required();
  sub->add_option("-D", opts.prec, "truncation degree")->required();
}

int run(int argc, char** argv) {
  CLI::App app{
      "exact automorphisms of truncated power series rings and their "
      "commutator decompositions"};
  app.require_subcommand(1);

  ContextOpts ctx_opts;
  std::string arg_a, arg_b, out_path, algorithm = "auto";
  std::uint64_t seed = 0;

  CLI::App* cmd_compose =
      app.add_subcommand("compose", "compose two automorphisms (A . B)");
  add_context_options(cmd_compose, ctx_opts);
  cmd_compose->add_option("A", arg_a, "outer automorphism (path or inline)")
      ->required();
  cmd_compose->add_option("B", arg_b, "inner automorphism (path or inline)")
      ->required();
  cmd_compose->add_option("-o", out_path, "output path (default stdout)");

  CLI::App* cmd_invert =
      app.add_subcommand("invert", "invert an automorphism");
  add_context_options(cmd_invert, ctx_opts);
  cmd_invert->add_option("A", arg_a, "automorphism (path or inline)")
      ->required();
  cmd_invert->add_option("-o", out_path, "output path (default stdout)");

  CLI::App* cmd_commutator = app.add_subcommand(
      "commutator", "commutator [A,B] = A . B . A^-1 . B^-1");
  add_context_options(cmd_commutator, ctx_opts);
  cmd_commutator->add_option("A", arg_a, "first automorphism")->required();
  cmd_commutator->add_option("B", arg_b, "second automorphism")->required();
  cmd_commutator->add_option("-o", out_path, "output path (default stdout)");

  CLI::App* cmd_decompose = app.add_subcommand(
      "decompose",
      "decompose an identity-linear-part automorphism into commutators");
  add_context_options(cmd_decompose, ctx_opts);
  cmd_decompose->add_option("A", arg_a, "target automorphism")->required();
  cmd_decompose->add_option("-o", out_path, "certificate path (default "
                                            "stdout)");
  cmd_decompose
      ->add_option("--algorithm", algorithm,
                   "auto, char0, charp1 (one variable), or charpn")
      ->check(CLI::IsMember({"auto", "char0", "charp1", "charpn"}));

  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "verify a certificate against a target automorphism");
  cmd_verify->add_option("certificate", arg_a, "certificate path")
      ->required();
  cmd_verify->add_option("target", arg_b, "target automorphism (path or "
                                          "inline)")
      ->required();

  CLI::App* cmd_random = app.add_subcommand(
      "random", "deterministic random identity-linear-part automorphism");
  add_context_options(cmd_random, ctx_opts);
  cmd_random->add_option("--seed", seed, "generator seed")->required();
  cmd_random->add_option("-o", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << "UsageError: " << e.what() << "\n";
    return 2;
  }

  if (cmd_compose->parsed()) {
    SeriesContext ctx = ctx_opts.context();
    Automorphism a = parse_automorphism(read_input(arg_a), ctx);
    Automorphism b = parse_automorphism(read_input(arg_b), ctx);
    write_output(out_path, emit_automorphism(compose(a, b)));
    return 0;
  }
  if (cmd_invert->parsed()) {
    SeriesContext ctx = ctx_opts.context();
    Automorphism a = parse_automorphism(read_input(arg_a), ctx);
    write_output(out_path, emit_automorphism(invert(a)));
    return 0;
  }
  if (cmd_commutator->parsed()) {
    SeriesContext ctx = ctx_opts.context();
    Automorphism a = parse_automorphism(read_input(arg_a), ctx);
    Automorphism b = parse_automorphism(read_input(arg_b), ctx);
    write_output(out_path, emit_automorphism(commutator(a, b)));
    return 0;
  }
  if (cmd_decompose->parsed()) {
    SeriesContext ctx = ctx_opts.context();
    Automorphism a = parse_automorphism(read_input(arg_a), ctx);
    const std::uint64_t p = ctx.ring->characteristic();
    std::string algo = algorithm;
    if (algo == "auto") {
      if (p == 0)
        algo = "char0";
      else if (p < 5)
        throw UnsupportedCharacteristic(
            "no construction for characteristic " + std::to_string(p));
      else
        algo = (ctx.nvars == 1) ? "charp1" : "charpn";
    }
    CommutatorCertificate cert = [&] {
      if (algo == "char0")
        return decompose_char0(a, default_char0_params(ctx.ring));
      if (algo == "charp1") return decompose_univariate_charp(a);
      return decompose_multivariate_charp(a);
    }();
    write_output(out_path, emit_certificate(cert));
    // The certificate was verified on construction; re-check independently
    // so the reported status never relies on producer state.
    VerifyResult vr = verify_certificate(cert, a);
    std::ostream& info = out_path.empty() ? std::cerr : std::cout;
    info << "pairs: " << cert.pairs.size() << "\n";
    info << "verified: " << (vr.ok ? "yes" : "no") << "\n";
    return vr.ok ? 0 : 1;
  }
  if (cmd_verify->parsed()) {
    CommutatorCertificate cert = parse_certificate(read_file(arg_a));
    Automorphism target =
        parse_automorphism(read_input(arg_b), cert.context);
    VerifyResult vr = verify_certificate(cert, target);
    if (vr.ok) {
      std::cout << "verified: yes\n";
      std::cout << "pairs: " << cert.pairs.size() << "\n";
      return 0;
    }
    std::cout << "VerifyFailed: certificate product differs from the "
                 "target\n";
    if (vr.discrepancy) {
      const Discrepancy& d = *vr.discrepancy;
      std::cout << "degree: " << d.degree << "\n";
      std::cout << "monomial:";
      for (std::uint32_t e : d.monomial) std::cout << " " << e;
      std::cout << "\n";
      std::cout << "image: X" << (d.image_index + 1) << "\n";
      std::cout << "expected: " << to_text(d.expected) << "\n";
      std::cout << "got: " << to_text(d.got) << "\n";
    }
    return 1;
  }
  if (cmd_random->parsed()) {
    SeriesContext ctx = ctx_opts.context();
    write_output(out_path, emit_automorphism(random_gi(ctx, seed)));
    return 0;
  }
  throw UsageError("no subcommand given");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cout << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << "InternalContradiction: unhandled exception: " << e.what()
              << "\n";
    return 3;
  }
}
