// Copyright 2026 The otlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "otlab/measure.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace otlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void DiscreteMeasure::validate() const {
  if (atoms.cols() != masses.size()) {
    throw std::invalid_argument("DiscreteMeasure: atom/mass count mismatch");
  }
  if ((masses.array() < 0.0).any()) {
    throw std::invalid_argument("DiscreteMeasure: negative mass");
  }
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if ((atoms.col(i) - atoms.col(j)).norm() == 0.0) {
        throw std::invalid_argument("DiscreteMeasure: duplicate atoms at " +
                                    std::to_string(i) + " and " +
                                    std::to_string(j));
      }
    }
  }
}

DiscreteMeasure DiscreteMeasure::uniform(const Eigen::MatrixXd& atoms) {
  DiscreteMeasure m;
  m.atoms = atoms;
  m.masses = Eigen::VectorXd::Constant(atoms.cols(), 1.0 / atoms.cols());
  return m;
}

double csiszar_divergence(const ConjugatePair& pair,
                          const Eigen::VectorXd& p_masses,
                          const Eigen::VectorXd& q_masses) {
  if (p_masses.size() != q_masses.size()) {
    throw std::invalid_argument(
        "csiszar_divergence: measures must share an atom index set");
  }
  double total = 0.0;
  double singular_mass = 0.0;
  for (Eigen::Index i = 0; i < p_masses.size(); ++i) {
    const double p = p_masses[i];
    const double q = q_masses[i];
    if (p < 0.0 || q < 0.0) {
      throw std::invalid_argument("csiszar_divergence: negative mass");
    }
    if (q > 0.0) {
      total += pair.primal_value(p / q) * q;
    } else {
      singular_mass += p;
    }
  }
  if (singular_mass > 0.0) {
    total += pair.primal_slope_at_infinity() * singular_mass;
  }
  return total;
}

double csiszar_divergence(const ConjugatePair& pair, const DiscreteMeasure& p,
                          const DiscreteMeasure& q) {
  return csiszar_divergence(pair, p.masses, q.masses);
}

namespace {

// Line/column-tracking tokenizer for the instance format.
class InstanceLexer {
 public:
  InstanceLexer(std::istream& in, std::string filename)
      : in_(in), filename_(std::move(filename)) {}

  // Next whitespace-separated token, skipping '#' comments. Returns false at
  // end of input. Records the token start position.
  bool next(std::string& tok) {
    tok.clear();
    for (;;) {
      const int c = get();
      if (c == EOF) return false;
      if (c == '#') {
        skip_line();
        continue;
      }
      if (std::isspace(c)) continue;
      tok_line_ = line_;
      tok_col_ = col_ - 1;
      tok.push_back(static_cast<char>(c));
      for (;;) {
        const int d = peek();
        if (d == EOF || std::isspace(d) || d == '#') break;
        tok.push_back(static_cast<char>(get()));
      }
      return true;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << filename_ << ":" << tok_line_ << ":" << tok_col_ << ": " << msg;
    throw MeasureParseError(os.str(), tok_line_, tok_col_);
  }

  std::string expect(const std::string& what) {
    std::string tok;
    if (!next(tok)) {
      tok_line_ = line_;
      tok_col_ = col_;
      fail("unexpected end of input, expected " + what);
    }
    return tok;
  }

  double expect_number(const std::string& what) {
    const std::string tok = expect(what);
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) fail("expected " + what + ", got '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail("expected " + what + ", got '" + tok + "'");
    }
  }

  long expect_count(const std::string& what) {
    const double v = expect_number(what);
    if (v < 1 || v != std::floor(v)) {
      fail(what + " must be a positive integer");
    }
    return static_cast<long>(v);
  }

  void expect_keyword(const std::string& kw) {
    const std::string tok = expect("keyword '" + kw + "'");
    if (tok != kw) fail("expected keyword '" + kw + "', got '" + tok + "'");
  }

 private:
  int get() {
    const int c = in_.get();
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if (c != EOF) {
      ++col_;
    }
    return c;
  }
  int peek() { return in_.peek(); }
  void skip_line() {
    int c;
    while ((c = get()) != EOF && c != '\n') {
    }
  }

  std::istream& in_;
  std::string filename_;
  int line_ = 1, col_ = 1;
  int tok_line_ = 1, tok_col_ = 1;
};

DiscreteMeasure read_measure_block(InstanceLexer& lex, const std::string& name,
                                   long dim) {
  lex.expect_keyword(name);
  const long n = lex.expect_count("atom count for " + name);
  DiscreteMeasure m;
  m.atoms.resize(dim, n);
  m.masses.resize(n);
  for (long i = 0; i < n; ++i) {
    for (long d = 0; d < dim; ++d) {
      m.atoms(d, i) = lex.expect_number("coordinate");
    }
    const double mass = lex.expect_number("mass");
    if (mass < 0.0) lex.fail("mass must be non-negative");
    m.masses[i] = mass;
  }
  return m;
}

}  // namespace

Instance read_instance(std::istream& in, const std::string& filename) {
  InstanceLexer lex(in, filename);
  lex.expect_keyword("dim");
  const long dim = lex.expect_count("dimension");
  Instance inst;
  inst.mu = read_measure_block(lex, "mu", dim);
  inst.nu = read_measure_block(lex, "nu", dim);
  std::string extra;
  if (lex.next(extra)) lex.fail("trailing content '" + extra + "'");
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(in, path);
}

void write_instance(std::ostream& out, const Instance& inst) {
  const int dim = inst.mu.dim();
  out << "dim " << dim << "\n";
  const auto dump = [&](const char* name, const DiscreteMeasure& m) {
    out << name << " " << m.size() << "\n";
    out.precision(17);
    for (int i = 0; i < m.size(); ++i) {
      for (int d = 0; d < dim; ++d) out << m.atoms(d, i) << " ";
      out << m.masses[i] << "\n";
    }
  };
  dump("mu", inst.mu);
  dump("nu", inst.nu);
}

}  // namespace otlab
