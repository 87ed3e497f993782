#include "knotdimer/representation.hpp"

#include <functional>
#include <sstream>

#include "knotdimer/error.hpp"

namespace knotdimer {

namespace {

int mod(long long a, int p) { return static_cast<int>(((a % p) + p) % p); }

}  // namespace

IntMatrix reflection_matrix(int p, int c) {
  IntMatrix m = IntMatrix::Zero(p, p);
  for (int k = 0; k < p; ++k) {
    const int image = mod(2LL * c - (k + 1), p);
    m(mod(image - 1, p), k) = 1;
  }
  return m;
}

Representation builtin_coloring_rep(const KnotDiagram& d, int p, const std::vector<int>& colors) {
  if (p < 3 || p % 2 == 0) throw Error(ErrorKind::InvalidColoring, "p must be an odd integer >= 3, got " + std::to_string(p));
  if (static_cast<int>(colors.size()) != static_cast<int>(d.arcs().size())) {
    throw Error(ErrorKind::InvalidColoring, std::to_string(colors.size()) + " colours for " +
                                                std::to_string(d.arcs().size()) + " arcs");
  }
  bool constant = true;
  for (int c : colors)
    if (mod(c, p) != mod(colors.front(), p)) constant = false;
  if (constant) throw Error(ErrorKind::InvalidColoring, "colouring is constant");
  for (const auto& r : wirtinger_relations(d)) {
    const long long lhs = 2LL * colors[static_cast<std::size_t>(r.over_arc)];
    const long long rhs = colors[static_cast<std::size_t>(r.in_arc)] + colors[static_cast<std::size_t>(r.out_arc)];
    if (mod(lhs - rhs, p) != 0) {
      throw Error(ErrorKind::InvalidColoring, "crossing " + std::to_string(r.crossing) + " breaks 2*over = in + out mod " +
                                                  std::to_string(p));
    }
  }
  Representation rho;
  rho.dim = p;
  for (int c : colors) rho.images.push_back(reflection_matrix(p, mod(c, p)));
  return rho;
}

std::vector<std::vector<int>> find_colorings(const KnotDiagram& d, int p) {
  std::vector<std::vector<int>> out;
  const int arcs = static_cast<int>(d.arcs().size());
  if (arcs == 0) return out;
  const auto rel = wirtinger_relations(d);
  std::vector<int> colors(static_cast<std::size_t>(arcs), 0);
  std::function<void(int)> search = [&](int a) {
    if (a == arcs) {
      for (const auto& r : rel) {
        if (mod(2LL * colors[static_cast<std::size_t>(r.over_arc)] - colors[static_cast<std::size_t>(r.in_arc)] -
                    colors[static_cast<std::size_t>(r.out_arc)],
                p) != 0)
          return;
      }
      for (int c : colors)
        if (c != colors.front()) {
          out.push_back(colors);
          return;
        }
      return;
    }
    for (int c = 0; c < p; ++c) {
      colors[static_cast<std::size_t>(a)] = c;
      search(a + 1);
    }
  };
  search(1);
  return out;
}

Representation trivial_rep(const KnotDiagram& d) {
  Representation rho;
  rho.dim = 1;
  rho.images.assign(d.arcs().size(), IntMatrix::Identity(1, 1));
  return rho;
}

long long int_det(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidRepresentation, "matrix is not square");
  const LaurentPoly value = det(to_lp(m));
  if (value.is_zero()) return 0;
  return value.coeff(0).get_si();
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  const long long dt = int_det(m);
  if (dt != 1 && dt != -1) throw Error(ErrorKind::InvalidRepresentation, "determinant " + std::to_string(dt) + " is not +-1");
  const Eigen::Index n = m.rows();
  IntMatrix inv(n, n);
  if (n == 1) {
    inv(0, 0) = dt;
    return inv;
  }
  // Adjugate over the integers.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const long long cof = ((i + j) % 2 ? -1 : 1) * int_det(minor);
      inv(i, j) = cof * dt;
    }
  }
  return inv;
}

bool verify_representation(const KnotDiagram& d, const Representation& rho) {
  if (rho.images.size() != d.arcs().size()) return false;
  for (const auto& img : rho.images)
    if (img.rows() != rho.dim || img.cols() != rho.dim) return false;
  for (const auto& r : wirtinger_relations(d)) {
    const IntMatrix& x = rho.images[static_cast<std::size_t>(r.over_arc)];
    const IntMatrix xinv = unimodular_inverse(x);
    const IntMatrix& in = rho.images[static_cast<std::size_t>(r.in_arc)];
    const IntMatrix& out = rho.images[static_cast<std::size_t>(r.out_arc)];
    const IntMatrix expected = r.sign > 0 ? IntMatrix(xinv * in * x) : IntMatrix(x * in * xinv);
    if (expected != out) return false;
  }
  return true;
}

Representation conjugate(const Representation& rho, const IntMatrix& p) {
  const IntMatrix pinv = unimodular_inverse(p);
  Representation out = rho;
  for (auto& img : out.images) img = p * img * pinv;
  return out;
}

Representation parse_representation(std::string_view text, int arc_count) {
  std::istringstream in{std::string(text)};
  auto fail = [](const std::string& why) -> void { throw Error(ErrorKind::InvalidRepresentation, why); };
  std::string line;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      const auto b = out.find_first_not_of(" \t\r");
      if (b == std::string::npos || out[b] == '#') continue;
      out = out.substr(b);
      return true;
    }
    return false;
  };
  if (!next_line(line)) fail("empty representation file");
  Representation rho;
  {
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word >> rho.dim) || word != "dim" || rho.dim < 1) fail("first line must be 'dim n' with n >= 1");
    std::string extra;
    if (ls >> extra) fail("unexpected text after 'dim n'");
  }
  rho.images.assign(static_cast<std::size_t>(arc_count), IntMatrix());
  std::vector<char> seen(static_cast<std::size_t>(arc_count), 0);
  while (next_line(line)) {
    std::istringstream ls(line);
    std::string word;
    int id = -1;
    if (!(ls >> word >> id) || word != "arc") fail("expected 'arc <id>', got '" + line + "'");
    if (id < 0 || id >= arc_count) fail("arc id " + std::to_string(id) + " out of range 0.." + std::to_string(arc_count - 1));
    if (seen[static_cast<std::size_t>(id)]) fail("arc " + std::to_string(id) + " given twice");
    seen[static_cast<std::size_t>(id)] = 1;
    IntMatrix m(rho.dim, rho.dim);
    for (int r = 0; r < rho.dim; ++r) {
      if (!next_line(line)) fail("arc " + std::to_string(id) + ": missing matrix row");
      std::istringstream rs(line);
      std::vector<long long> row;
      long long v;
      while (rs >> v) row.push_back(v);
      if (!rs.eof()) fail("arc " + std::to_string(id) + ": non-integer entry");
      if (static_cast<int>(row.size()) != rho.dim)
        fail("arc " + std::to_string(id) + ": row has " + std::to_string(row.size()) + " entries, expected " +
             std::to_string(rho.dim));
      for (int c = 0; c < rho.dim; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    const long long dt = int_det(m);
    if (dt != 1 && dt != -1) fail("arc " + std::to_string(id) + ": determinant " + std::to_string(dt) + " is not +-1");
    rho.images[static_cast<std::size_t>(id)] = m;
  }
  for (int a = 0; a < arc_count; ++a)
    if (!seen[static_cast<std::size_t>(a)]) fail("arc " + std::to_string(a) + " has no matrix");
  return rho;
}

std::string format_representation(const Representation& rho) {
  std::ostringstream os;
  os << "dim " << rho.dim << '\n';
  for (std::size_t a = 0; a < rho.images.size(); ++a) {
    os << "arc " << a << '\n';
    const auto& m = rho.images[a];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << m(r, c);
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace knotdimer
