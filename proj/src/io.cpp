#include "hp/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hp {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + msg);
}

// reads lines, skipping blanks and '#' comments, tracking the line number
struct LineReader {
  std::istream& is;
  std::string path;
  int lineno = 0;
  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(is, line)) {
      ++lineno;
      size_t h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      size_t p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos) continue;
      out = std::istringstream(line);
      return true;
    }
    return false;
  }
};

double want_num(std::istringstream& ls, LineReader& r, const std::string& what) {
  double v;
  if (!(ls >> v)) fail(r.path, r.lineno, "expected " + what);
  return v;
}

void want_header(LineReader& r, const std::string& magic) {
  std::istringstream ls;
  if (!r.next(ls)) fail(r.path, r.lineno, "empty file");
  std::string tag, ver;
  ls >> tag >> ver;
  if (tag != magic || ver != "v1")
    fail(r.path, r.lineno, "expected header '" + magic + " v1'");
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(path + ": cannot open");
  return f;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParseError(path + ": cannot write");
  return f;
}

}  // namespace

SurfaceGroup load_group(const std::string& path) {
  std::ifstream f = open_in(path);
  LineReader r{f, path};
  want_header(r, "hp-group");
  SurfaceGroup G;
  int n_gens = -1;
  std::istringstream ls;
  while (r.next(ls)) {
    std::string key;
    ls >> key;
    if (key == "genus") {
      G.genus = static_cast<int>(want_num(ls, r, "genus"));
    } else if (key == "gens") {
      n_gens = static_cast<int>(want_num(ls, r, "generator count"));
      if (n_gens < 1 || n_gens > 64) fail(path, r.lineno, "bad generator count");
    } else if (key == "gen") {
      Mat M(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          M(i, j) = want_num(ls, r, "matrix entry");
      G.gens.push_back(M);
    } else if (key == "relator") {
      int s;
      while (ls >> s) {
        if (s == 0 || std::abs(s) > static_cast<int>(G.gens.size()))
          fail(path, r.lineno, "relator letter out of range");
        G.relator.push_back(s);
      }
    } else {
      fail(path, r.lineno, "unknown directive '" + key + "'");
    }
  }
  if (n_gens >= 0 && n_gens != static_cast<int>(G.gens.size()))
    fail(path, r.lineno, "generator count does not match 'gens'");
  if (G.gens.empty()) fail(path, r.lineno, "no generators");
  return G;
}

void save_group(const std::string& path, const SurfaceGroup& G) {
  std::ofstream f = open_out(path);
  f << "hp-group v1\n";
  f << "genus " << G.genus << "\n";
  f << "gens " << G.gens.size() << "\n";
  for (const Mat& M : G.gens) {
    f << "gen";
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f << " " << fmt_g17(M(i, j));
    f << "\n";
  }
  f << "relator";
  for (int s : G.relator) f << " " << s;
  f << "\n";
}

Cocycle load_cocycle(const SurfaceGroup& G, const std::string& path) {
  std::ifstream f = open_in(path);
  LineReader r{f, path};
  want_header(r, "hp-cocycle");
  Cocycle tau;
  bool have_part = false;
  std::istringstream ls;
  while (r.next(ls)) {
    std::string key;
    ls >> key;
    if (key == "coboundary") {
      for (int i = 0; i < 3; ++i)
        tau.coboundary(i) = want_num(ls, r, "coboundary component");
    } else if (key == "part") {
      double coeff = want_num(ls, r, "part coefficient");
      tau.lam_parts.emplace_back(SimplicialLamination{}, coeff);
      have_part = true;
    } else if (key == "basepoint") {
      if (!have_part) fail(path, r.lineno, "basepoint before any part");
      double x = want_num(ls, r, "basepoint x");
      double y = want_num(ls, r, "basepoint y");
      Vec b(2);
      b << x, y;
      if (b.norm() >= 1.0) fail(path, r.lineno, "basepoint outside the disk");
      tau.lam_parts.back().first.basepoint = KleinPoint(b);
    } else if (key == "curve") {
      if (!have_part) fail(path, r.lineno, "curve before any part");
      double w = want_num(ls, r, "curve weight");
      GroupWord word;
      int s;
      while (ls >> s) {
        if (s == 0 || std::abs(s) > static_cast<int>(G.gens.size()))
          fail(path, r.lineno, "curve letter out of range");
        word.letters.push_back(s);
      }
      if (word.letters.empty()) fail(path, r.lineno, "empty curve word");
      word.M = Mat::Identity(3, 3);
      for (int l : word.letters) word.M *= G.letter(l);
      tau.lam_parts.back().first.curves.emplace_back(word, w);
    } else {
      fail(path, r.lineno, "unknown directive '" + key + "'");
    }
  }
  return tau;
}

void save_cocycle(const std::string& path, const Cocycle& tau) {
  std::ofstream f = open_out(path);
  f << "hp-cocycle v1\n";
  f << "coboundary " << fmt_g17(tau.coboundary(0)) << " "
    << fmt_g17(tau.coboundary(1)) << " " << fmt_g17(tau.coboundary(2)) << "\n";
  for (const auto& [lam, coeff] : tau.lam_parts) {
    f << "part " << fmt_g17(coeff) << "\n";
    f << "basepoint " << fmt_g17(lam.basepoint.x(0)) << " "
      << fmt_g17(lam.basepoint.x(1)) << "\n";
    for (const auto& [word, w] : lam.curves) {
      f << "curve " << fmt_g17(w);
      for (int s : word.letters) f << " " << s;
      f << "\n";
    }
  }
}

std::string norm_record(const NormReport& r) {
  std::ostringstream os;
  os << "hp-norm v1\n";
  os << "s1_plus " << fmt_g17(r.s1_plus) << "\n";
  os << "s1_minus " << fmt_g17(r.s1_minus) << "\n";
  os << "volume " << fmt_g17(r.volume) << "\n";
  os << "lam_length " << fmt_g17(r.lamination_length) << "\n";
  os << "area_check " << fmt_g17(r.area_check) << "\n";
  os << "error_bar " << fmt_g17(r.error_bar) << "\n";
  os << "nr " << r.settings.n_r << "\n";
  os << "ntheta " << r.settings.n_theta << "\n";
  os << "nboundary " << r.settings.n_boundary << "\n";
  os << "wordlen " << r.settings.word_len << "\n";
  os << "ntri " << r.settings.n_tri << "\n";
  os << "tol " << fmt_g17(r.settings.tol) << "\n";
  return os.str();
}

void write_polar_field(std::ostream& os, const std::string& name,
                       const ScalarField& f) {
  const int nr = static_cast<int>(f.grid.radii.size());
  os << "hp-field v1\n";
  os << "field " << name << "\n";
  os << "nr " << nr << " ntheta " << f.grid.n_theta << "\n";
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < f.grid.n_theta; ++j)
      os << fmt_g17(f.grid.radii(i)) << " " << fmt_g17(f.grid.theta(j)) << " "
         << fmt_g17(f.values(i, j)) << "\n";
}

void write_mask_grid(std::ostream& os, const SurfaceGroup& G, int n,
                     int word_len) {
  os << "hp-mask v1\n";
  os << "n " << n << " range -1 1\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double x = -1.0 + 2.0 * (j + 0.5) / n;
      double y = -1.0 + 2.0 * (i + 0.5) / n;
      Vec p(2);
      p << x, y;
      bool in = p.norm() < 1.0 - 1e-9 &&
                in_dirichlet_domain(G, KleinPoint(p), word_len);
      os << (in ? '1' : '0');
    }
    os << "\n";
  }
}

void write_envelope_mesh(std::ostream& os, const LowerEnvelope& env) {
  os << "hp-mesh v1\n";
  os << "sign " << fmt_g17(env.sign) << "\n";
  os << "samples " << env.samples.size() << "\n";
  for (int k = 0; k < env.samples.size(); ++k)
    os << fmt_g17(env.samples(k)) << "\n";
  os << "faces " << env.faces.size() << "\n";
  for (size_t k = 0; k < env.faces.size(); ++k) {
    const auto& f = env.faces[k];
    const AffineFunction& pl = env.planes[k];
    os << f[0] << " " << f[1] << " " << f[2] << " " << fmt_g17(pl.vbar(0))
       << " " << fmt_g17(pl.vbar(1)) << " " << fmt_g17(pl.c) << "\n";
  }
}

}  // namespace hp
