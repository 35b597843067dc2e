#pragma once

// Command-line front end: construct, verify, rank, demo.
//
// Exit codes: 0 success, 1 verification failed, 2 malformed input,
// 3 unmet precondition, 4 construction or self-verification failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "eos/artifact.hpp"
#include "eos/constructor.hpp"
#include "eos/errors.hpp"
#include "eos/verifier.hpp"

namespace eos::cli {

enum Exit { kOk = 0, kVerifyFailed = 1, kMalformed = 2, kPrecondition = 3, kConstruction = 4 };

struct ConstructArgs {
  std::string system = "odometer";
  std::string x = "0";
  std::string y = "1/3";
  std::string target = "w";
  int depth = 4;
  std::string eps = "dyadic";
  std::uint64_t seed = 0;
  std::string out;
};

inline void print_report(const VerifyReport& r, std::ostream& out) {
  for (const auto& c : r.checks) {
    out << c.name << "=" << (c.pass ? "pass" : "fail");
    if (!c.pass) out << " " << c.detail;
    out << "\n";
  }
  out << "result=" << (r.all_pass() ? "pass" : "fail") << "\n";
}

inline json report_json(const VerifyReport& r) {
  json j = json::object();
  for (const auto& c : r.checks) j[c.name] = {{"pass", c.pass}, {"detail", c.detail}};
  j["result"] = r.all_pass();
  return j;
}

template <DynamicalSystem Sys>
int construct_with(const Sys& sys, const ConstructArgs& a, std::ostream& out, std::ostream& err) {
  using Point = typename Sys::Point;
  Point x = sys.parse_point(a.x);
  Point y = sys.parse_point(a.y);
  OrderTerm t = parse_term(a.target);
  EpsSchedule sched = EpsSchedule::parse(a.eps);
  Constructor<Sys> ctor(sys, sched, a.depth);
  auto alloc = std::make_shared<ClassAllocator<Sys>>(sys, a.seed);
  Construction<Point> c = ctor.build_scattered(x, y, t, alloc);
  VerifyReport report = verify_all(sys, c.family, c.trace, c.target);
  json j = artifact_to_json(sys, c);
  if (!report.all_pass()) {
    print_report(report, err);
    err << "error: constructed family failed self-verification\n";
    return kConstruction;
  }
  if (a.out.empty()) {
    out << j.dump(1) << "\n";
  } else {
    std::ofstream f(a.out);
    if (!f) {
      err << "error: cannot write " << a.out << "\n";
      return kConstruction;
    }
    f << j.dump(1) << "\n";
    out << "wrote=" << a.out << "\n";
    out << "target=" << render_term(c.target) << "\n";
    out << "rank=" << vd_rank(c.target).to_string() << "\n";
    out << "stages=" << c.family.stages.size() << "\n";
    out << "support_last=" << c.family.stages.back().points.size() << "\n";
    print_report(report, out);
  }
  return kOk;
}

inline int cmd_construct(const ConstructArgs& a, std::ostream& out, std::ostream& err) {
  try {
    AnySystem sys = parse_system(a.system);
    return std::visit([&](const auto& s) { return construct_with(s, a, out, err); }, sys);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kMalformed;
  } catch (const SemanticError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kMalformed;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "construction failed: " << e.what() << "\n";
    return kConstruction;
  }
}

inline int cmd_verify(const std::string& path, bool as_json, std::ostream& out, std::ostream& err) {
  json j;
  try {
    std::ifstream f(path);
    if (!f) {
      err << "error: cannot read " << path << "\n";
      return kMalformed;
    }
    j = json::parse(f);
  } catch (const json::exception& e) {
    err << "malformed artifact: " << e.what() << "\n";
    return kMalformed;
  }
  try {
    if (!j.is_object() || !j.contains("system")) throw ParseError("artifact has no system", 0);
    AnySystem sys = parse_system(j.at("system").get<std::string>());
    return std::visit(
        [&](const auto& s) {
          auto c = artifact_from_json(s, j);
          VerifyReport r = verify_all(s, c.family, c.trace, c.target);
          if (as_json) out << report_json(r).dump(1) << "\n";
          else print_report(r, out);
          return r.all_pass() ? kOk : kVerifyFailed;
        },
        sys);
  } catch (const ParseError& e) {
    err << "malformed artifact: " << e.what() << "\n";
    return kMalformed;
  } catch (const SemanticError& e) {
    err << "malformed artifact: " << e.what() << "\n";
    return kMalformed;
  } catch (const json::exception& e) {
    err << "malformed artifact: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::exception& e) {
    err << "verification error: " << e.what() << "\n";
    return kVerifyFailed;
  }
}

inline int cmd_rank(const std::string& text, std::ostream& out, std::ostream& err) {
  try {
    out << vd_rank(parse_term(text)).to_string() << "\n";
    return kOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
  } catch (const SemanticError& e) {
    err << "invalid term: " << e.what() << "\n";
  }
  return kMalformed;
}

// Builds a few families on the odometer and prints their block structure.
inline int cmd_demo(std::ostream& out) {
  Odometer sys;
  const Rational x(0), y(1, 3);
  const std::vector<std::string> terms = {"sum(fin; w, fin(3))", "sum(w*; ; z)", "sum(w; ; w)",
                                          "sum(fin; w, w*, z)"};
  for (const auto& text : terms) {
    Constructor<Odometer> ctor(sys, EpsSchedule::dyadic(), 4);
    auto alloc = std::make_shared<ClassAllocator<Odometer>>(sys, 0);
    OrderTerm t = parse_term(text);
    auto c = ctor.build_scattered(x, y, t, alloc);
    VerifyReport r = verify_all(sys, c.family, c.trace, c.target);
    out << render_term(t) << "  rank " << vd_rank(t).to_string() << "  " << (r.all_pass() ? "verified" : "FAILED")
        << "\n";
    for (std::size_t n = 0; n < c.family.stages.size(); ++n) {
      out << "  stage " << n + 1 << " (eps " << c.family.epsilons[n].to_string() << "): "
          << c.family.stages[n].points.size() << " points";
      std::string blocks;
      for (const auto& b : c.trace.blocks) {
        if (b.path.size() != 1 || b.first_stage > static_cast<int>(n + 1)) continue;
        blocks += " [" + std::to_string(b.path[0]) + "]:" +
                  std::to_string(b.sizes[n + 1 - static_cast<std::size_t>(b.first_stage)]);
      }
      if (!blocks.empty()) out << ", blocks" << blocks;
      out << "\n";
    }
    if (!r.all_pass()) return kConstruction;
  }
  return kOk;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Chain families realizing scattered order types in the chain relation"};
  app.require_subcommand(1);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build a chain family and write it as JSON");
  construct->add_option("--system", ca.system, "odometer | rotation:<golden|silver|cf:a1,...>");
  construct->add_option("--x", ca.x, "start point");
  construct->add_option("--y", ca.y, "end point");
  construct->add_option("--target", ca.target, "order term, e.g. \"sum(w*; ; z)\"");
  construct->add_option("--depth", ca.depth, "number of stages");
  construct->add_option("--eps", ca.eps, "recip | dyadic | list:e1,e2,...");
  construct->add_option("--seed", ca.seed, "first prime index for class allocation");
  construct->add_option("--out", ca.out, "artifact path (stdout when omitted)");

  std::string path;
  bool as_json = false;
  auto* verify = app.add_subcommand("verify", "check a chain artifact");
  verify->add_option("artifact", path, "artifact path")->required();
  verify->add_flag("--json", as_json, "machine-readable report");

  std::string term;
  auto* rank = app.add_subcommand("rank", "print the syntactic very-discrete rank of a term");
  rank->add_option("term", term, "order term")->required();

  auto* demo = app.add_subcommand("demo", "construct and summarize a few odometer families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kMalformed;
  }
  if (*construct) return cmd_construct(ca, out, err);
  if (*verify) return cmd_verify(path, as_json, out, err);
  if (*rank) return cmd_rank(term, out, err);
  if (*demo) return cmd_demo(out);
  return kMalformed;
}

}  // namespace eos::cli
