#pragma once

// Command-line front end. `run` is kept separate from main() so the tests can
// drive it in-process.
//
// Exit codes: 0 ok, 1 verification failed, 2 parse or usage error,
// 3 not a solution, 4 no commutator decomposition, 5 not in image,
// 6 any other error (resource limits, I/O).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "thompson/thompson.hpp"

namespace thompson::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kParseFailure = 2,
  kNotASolution = 3,
  kDecompositionNotFound = 4,
  kNotInImage = 5,
  kOtherError = 6,
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ResourceLimit, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ResourceLimit, "cannot write " + path);
  f << text;
}

// "A=2,B=3" or "A=2 B=3"
inline IntAssignment parse_int_assignment(const std::string& s) {
  IntAssignment out;
  std::string token;
  std::size_t column = 1;
  auto flush = [&](std::size_t end_col) {
    if (token.empty()) return;
    const auto eq = token.find('=');
    const std::size_t start_col = end_col - token.size();
    if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
      throw ParseError(0, start_col, "expected NAME=VALUE, got '" + token + "'");
    }
    const std::string name = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    for (char c : value) {
      if (c < '0' || c > '9') throw ParseError(0, start_col + eq + 1, "value must be a non-negative integer");
    }
    out[name] = std::stoll(value);
    token.clear();
  };
  for (char c : s) {
    if (c == ',' || c == ' ') {
      flush(column);
    } else {
      token += c;
    }
    ++column;
  }
  flush(column);
  return out;
}

inline std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  for (auto& n : out) {
    if (!n.empty() && n.front() == '$') n.erase(0, 1);
  }
  return out;
}

inline ExitCode exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownConstant:
    case ErrorCode::UnknownSet:
    case ErrorCode::NegativeCoefficient:
    case ErrorCode::NonMonotone:
    case ErrorCode::BadSlope:
    case ErrorCode::NonDyadic:
    case ErrorCode::BadEndpoints:
      return kParseFailure;
    case ErrorCode::NotASolution:
      return kNotASolution;
    case ErrorCode::DecompositionNotFound:
      return kDecompositionNotFound;
    case ErrorCode::NotInImage:
      return kNotInImage;
    default:
      return kOtherError;
  }
}

inline std::string describe(const ParseError& e, const std::string& source) {
  std::string where = source.empty() ? "" : source + ":";
  if (e.line() > 0) where += std::to_string(e.line()) + ":";
  where += std::to_string(e.column());
  return where + ": " + e.message();
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thompson's group F: exact arithmetic, definable sets and the reduction from\n"
               "polynomial systems over the naturals to equations in F."};
  app.require_subcommand(1);
  app.footer(
      "Formats:\n"
      "  polynomial system: one `poly = poly` per line, '#' starts a comment\n"
      "    poly := mono (\"+\" mono)*   mono := NAT | NAT \"*\" factors | factors\n"
      "    factors := VAR (\"*\" VAR)*\n"
      "  group system: `const NAME = word`, `side = side`, '#' comments\n"
      "    side := \"1\" | atom+   atom := ($VAR | NAME) [\"^-1\"]\n"
      "  word: \"id\" | (x0|x1)[^INT] ...\n"
      "Exit codes: 0 ok, 1 verify failed, 2 parse error, 3 not a solution,\n"
      "  4 no commutator decomposition, 5 not in image, 6 other error");

  std::string current_source;

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Encode a polynomial system as a system of equations in F");
  std::string reduce_mode = "germ", reduce_in, reduce_out, reduce_map;
  reduce->add_option("--mode", reduce_mode, "germ or paper")->check(CLI::IsMember({"germ", "paper"}));
  reduce->add_option("-i,--input", reduce_in, "polynomial system file")->required();
  reduce->add_option("-o,--output", reduce_out, "encoded system (default stdout)");
  reduce->add_option("--map", reduce_map, "VarMap JSON output");

  // witness
  auto* wit = app.add_subcommand("witness", "Build a verified assignment from a solution");
  std::string wit_mode = "germ", wit_in, wit_assign, wit_out, wit_decomp;
  int wit_radius = 2;
  wit->add_option("--mode", wit_mode, "germ or paper")->check(CLI::IsMember({"germ", "paper"}));
  wit->add_option("-i,--input", wit_in, "polynomial system file")->required();
  wit->add_option("--assign", wit_assign, "solution, e.g. \"A=2,B=3\"")->required();
  wit->add_option("-o,--output", wit_out, "assignment JSON (default stdout)");
  wit->add_option("--decompositions", wit_decomp, "JSON file of commutator decompositions (paper mode)");
  wit->add_option("--search-radius", wit_radius, "ball radius for the commutator search (paper mode)")
      ->check(CLI::Range(0, 6));

  // verify
  auto* ver = app.add_subcommand("verify", "Check an assignment against a group system");
  std::string ver_sys, ver_assign;
  ver->add_option("-s,--system", ver_sys, "group system file")->required();
  ver->add_option("-a,--assignment", ver_assign, "assignment JSON")->required();

  // decode
  auto* dec = app.add_subcommand("decode", "Read the integer solution back from an assignment");
  std::string dec_assign, dec_map;
  dec->add_option("-a,--assignment", dec_assign, "assignment JSON")->required();
  dec->add_option("--map", dec_map, "VarMap JSON")->required();

  // solve
  auto* sol = app.add_subcommand("solve", "Bounded brute-force search over a ball of F");
  std::string sol_sys, sol_vars, sol_fix;
  int sol_radius = 2;
  bool sol_all = false;
  sol->add_option("-s,--system", sol_sys, "group system file")->required();
  sol->add_option("--radius", sol_radius, "ball radius")->required()->check(CLI::NonNegativeNumber);
  sol->add_option("--vars", sol_vars, "variables to search, e.g. X,Y (others come from --fix)");
  sol->add_option("--fix", sol_fix, "assignment JSON for the variables not searched");
  sol->add_flag("--all", sol_all, "list every solution in the ball");

  // eval
  auto* ev = app.add_subcommand("eval", "Print breakpoints, support and exponent sums of a word");
  std::string ev_word;
  ev->add_option("word", ev_word, "word in x0, x1")->required();

  // centralise
  auto* cen = app.add_subcommand("centralise", "Print the fixed-point decomposition of a word");
  std::string cen_word;
  cen->add_option("word", cen_word, "word in x0, x1")->required();

  // ball
  auto* bal = app.add_subcommand("ball", "Enumerate the ball of given radius");
  int ball_radius = 0;
  bool ball_count = false;
  bal->add_option("--radius", ball_radius, "radius")->required()->check(CLI::NonNegativeNumber);
  bal->add_flag("--count", ball_count, "print only the number of elements");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseFailure;
  }

  try {
    if (*reduce) {
      current_source = reduce_in;
      const auto p = normalize(parse_poly_system(detail::read_file(reduce_in)));
      current_source.clear();
      const auto [sys, map] = encode(p, parse_mode(reduce_mode));
      detail::write_output(reduce_out, serialize_group_system(sys), out);
      if (!reduce_map.empty()) detail::write_output(reduce_map, varmap_to_json(map).dump(2) + "\n", out);
      return kOk;
    }

    if (*wit) {
      current_source = wit_in;
      const auto p = normalize(parse_poly_system(detail::read_file(wit_in)));
      current_source = "--assign";
      const auto n = detail::parse_int_assignment(wit_assign);
      current_source.clear();
      CommutatorOracle oracle = search_oracle(wit_radius);
      if (!wit_decomp.empty()) {
        current_source = wit_decomp;
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(detail::read_file(wit_decomp));
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::ParseError, e.what());
        }
        oracle = table_oracle(parse_decompositions(j), oracle);
        current_source.clear();
      }
      const auto a = witness(p, n, parse_mode(wit_mode), oracle);
      detail::write_output(wit_out, serialize_assignment(a), out);
      return kOk;
    }

    if (*ver) {
      current_source = ver_sys;
      const auto sys = parse_group_system(detail::read_file(ver_sys));
      current_source = ver_assign;
      const auto a = parse_assignment(detail::read_file(ver_assign));
      current_source.clear();
      for (const auto& v : sys.variables()) {
        if (!a.contains(v)) {
          out << "fail: no value for $" << v << "\n";
          return kVerifyFailed;
        }
      }
      const auto& eqs = sys.equations();
      for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (!evaluate_word(eqs[i], a).is_identity()) {
          out << "fail: equation " << (i + 1) << ": " << serialize_word(eqs[i]) << " = 1\n";
          return kVerifyFailed;
        }
      }
      out << "ok: " << eqs.size() << " equations hold\n";
      return kOk;
    }

    if (*dec) {
      current_source = dec_assign;
      const auto a = parse_assignment(detail::read_file(dec_assign));
      current_source = dec_map;
      VarMap map;
      try {
        map = varmap_from_json(nlohmann::ordered_json::parse(detail::read_file(dec_map)));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
      }
      current_source.clear();
      const auto n = decode(a, map);
      std::string line;
      for (const auto& [poly_var, group_var] : map.source_vars) {
        if (!line.empty()) line += ' ';
        line += poly_var + "=" + std::to_string(n.at(poly_var));
      }
      out << line << "\n";
      return kOk;
    }

    if (*sol) {
      current_source = sol_sys;
      const auto sys = parse_group_system(detail::read_file(sol_sys));
      Assignment fixed;
      if (!sol_fix.empty()) {
        current_source = sol_fix;
        fixed = parse_assignment(detail::read_file(sol_fix));
      }
      current_source.clear();
      std::optional<std::vector<std::string>> vars;
      if (!sol_vars.empty()) vars = detail::split_names(sol_vars);
      SolveOptions options;
      options.exhaustive = sol_all;
      const auto result = brute_force_solve(sys, sol_radius, vars, fixed, options);
      if (result.solutions.empty()) {
        out << "none found within radius " << sol_radius << "\n";
        return kOk;
      }
      const Ball ball = enumerate_ball(sol_radius);
      std::unordered_map<Element, std::string> names;
      for (const auto& e : ball.elements) names.emplace(e.element, to_string(letters_to_word(e.word)));
      for (std::size_t i = 0; i < result.solutions.size(); ++i) {
        if (result.solutions.size() > 1) out << "solution " << (i + 1) << ":\n";
        for (const auto& v : result.searched) {
          const auto& e = result.solutions[i].at(v);
          out << "  $" << v << " = " << names.at(e) << "  " << breakpoints_display(e) << "\n";
        }
      }
      return kOk;
    }

    if (*ev) {
      current_source = "word";
      const Element e = word_to_element(ev_word);
      current_source.clear();
      const auto sums = abelianise(e);
      out << "breakpoints: " << breakpoints_display(e) << "\n";
      out << "support: " << to_string(support(e)) << "\n";
      out << "expsums: (" << sums.x0 << "," << sums.x1 << ")\n";
      return kOk;
    }

    if (*cen) {
      current_source = "word";
      const Element e = word_to_element(cen_word);
      current_source.clear();
      const auto d = fixed_decomposition(e);
      out << "cuts:";
      for (const auto& c : d.cuts) out << " " << c.to_string();
      out << "\n";
      for (std::size_t i = 0; i < d.kinds.size(); ++i) {
        out << "[" << d.cuts[i].to_string() << "," << d.cuts[i + 1].to_string() << "] " << to_string(d.kinds[i])
            << "\n";
      }
      return kOk;
    }

    if (*bal) {
      const Ball ball = enumerate_ball(ball_radius);
      if (ball_count) {
        out << ball.elements.size() << "\n";
        return kOk;
      }
      for (const auto& e : ball.elements) {
        out << to_string(letters_to_word(e.word)) << "  " << breakpoints_display(e.element) << "\n";
      }
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << detail::describe(e, current_source) << "\n";
    return kParseFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (!current_source.empty() && detail::exit_code_for(e.code()) == kParseFailure) {
      err << "  in " << current_source << "\n";
    }
    return detail::exit_code_for(e.code());
  }
  return kOk;
}

}  // namespace thompson::cli
