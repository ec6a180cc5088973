#include "qepi/state_spec.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace qepi {

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    std::ostringstream os;
    os << "state spec error at position " << at << ": " << msg;
    throw ParseError(os.str());
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
      ++pos;
    }
    if (pos == start) fail(start, "expected a constructor name");
    return s.substr(start, pos - start);
  }

  double number() {
    skip_ws();
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail(pos, "expected a number");
    pos += static_cast<std::size_t>(end - begin);
    return v;
  }

  StateTerm term() {
    const std::size_t at = pos;
    StateTerm t;
    t.name = ident();
    if (eat('(')) {
      if (!eat(')')) {
        t.args.push_back(number());
        while (eat(',')) t.args.push_back(number());
        if (!eat(')')) fail(pos, "expected ')' or ','");
      }
    }
    validate(t, at);
    return t;
  }

  void validate(const StateTerm& t, std::size_t at) const {
    const std::size_t n = t.args.size();
    if (t.name == "vacuum") {
      if (n != 0) fail(at, "vacuum takes no arguments");
    } else if (t.name == "thermal") {
      if (n != 1) fail(at, "thermal takes one argument: mean photon number");
      if (t.args[0] < 0.0) fail(at, "thermal mean photon number must be >= 0");
    } else if (t.name == "coherent") {
      if (n < 1 || n > 2) fail(at, "coherent takes one or two arguments");
    } else if (t.name == "fock") {
      if (n != 1) fail(at, "fock takes one argument: photon count");
      if (t.args[0] < 0.0 || t.args[0] != std::floor(t.args[0])) {
        fail(at, "fock photon count must be a non-negative integer");
      }
    } else if (t.name == "cat") {
      if (n < 1 || n > 2) fail(at, "cat takes one or two arguments");
    } else if (t.name == "random") {
      if (n < 1 || n > 2) fail(at, "random takes one or two arguments");
      if (t.args[0] < 0.0 || t.args[0] != std::floor(t.args[0])) {
        fail(at, "random seed must be a non-negative integer");
      }
      if (n == 2 && (t.args[1] < 1.0 || t.args[1] != std::floor(t.args[1]))) {
        fail(at, "random rank must be a positive integer");
      }
    } else {
      fail(at, "unknown constructor '" + t.name + "'");
    }
  }

  StateSpec parse() {
    StateSpec spec;
    spec.terms.push_back(term());
    while (eat('*')) spec.terms.push_back(term());
    skip_ws();
    if (pos != s.size()) fail(pos, "trailing input");
    return spec;
  }
};

std::string num_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

StateSpec parse_state_spec(const std::string& text) {
  Parser p{text};
  return p.parse();
}

std::string canonical_spec(const StateSpec& spec) {
  std::ostringstream os;
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    if (i) os << " * ";
    os << spec.terms[i].name;
    if (!spec.terms[i].args.empty()) {
      os << '(';
      for (std::size_t j = 0; j < spec.terms[i].args.size(); ++j) {
        if (j) os << ',';
        os << num_str(spec.terms[i].args[j]);
      }
      os << ')';
    }
  }
  return os.str();
}

namespace {

DensityMatrix build_term(const StateTerm& t, FockPtr space, double budget) {
  if (t.name == "vacuum") return make_vacuum(space);
  if (t.name == "thermal") return make_thermal(space, t.args[0], budget);
  if (t.name == "coherent") {
    const double im = t.args.size() > 1 ? t.args[1] : 0.0;
    return make_coherent(space, Complex(t.args[0], im), budget);
  }
  if (t.name == "fock") return make_fock(space, static_cast<int>(t.args[0]));
  if (t.name == "cat") {
    const double phase = t.args.size() > 1 ? t.args[1] : 0.0;
    return make_cat(space, Complex(t.args[0], 0.0), phase, budget);
  }
  // random(seed[, rank])
  const auto seed = static_cast<std::uint64_t>(t.args[0]);
  const int rank = t.args.size() > 1 ? static_cast<int>(t.args[1]) : 1;
  return random_state(space, seed, rank);
}

}  // namespace

DensityMatrix build_state(const StateSpec& spec, int cutoff, double budget) {
  if (spec.terms.empty()) throw ParseError("state spec: empty");
  FockPtr one = make_space(1, cutoff);
  DensityMatrix rho = build_term(spec.terms[0], one, budget);
  for (std::size_t i = 1; i < spec.terms.size(); ++i) {
    rho = tensor(rho, build_term(spec.terms[i], one, budget));
  }
  return rho;
}

std::optional<GaussianState> build_gaussian(const StateSpec& spec) {
  Vec d = Vec::Zero(2 * static_cast<Eigen::Index>(spec.terms.size()));
  Mat gamma = Mat::Identity(d.size(), d.size());
  Eigen::Index k = 0;
  for (const StateTerm& t : spec.terms) {
    if (t.name == "thermal") {
      gamma(k, k) = gamma(k + 1, k + 1) = 2.0 * t.args[0] + 1.0;
    } else if (t.name == "coherent") {
      const double im = t.args.size() > 1 ? t.args[1] : 0.0;
      d(k) = std::sqrt(2.0) * t.args[0];
      d(k + 1) = std::sqrt(2.0) * im;
    } else if (t.name != "vacuum") {
      return std::nullopt;
    }
    k += 2;
  }
  return GaussianState(std::move(d), std::move(gamma));
}

}  // namespace qepi
