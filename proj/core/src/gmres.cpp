#include "fdbem/gmres.hpp"

#include <cmath>
#include <vector>

namespace fdbem {
namespace {

// Unitary rotation [c s; -conj(s) c] mapping (a, b) to (rho, 0).
void givens(Complex a, Complex b, double& c, Complex& s) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (na == 0.0) {
    c = 0.0;
    s = std::conj(b) / nb;
  } else {
    const double nrm = std::hypot(na, nb);
    c = na / nrm;
    s = (a / na) * std::conj(b) / nrm;
  }
}

}  // namespace

GmresResult gmres_solve(const LinearMap& a, const CVector& b, const GmresConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw Error("GMRES tolerance must be positive");
  if (cfg.max_iterations < 1) throw Error("GMRES max_iterations must be >= 1");
  GmresResult res;
  res.x = CVector::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const int cycle = cfg.restart > 0 ? cfg.restart : cfg.max_iterations;

  CVector r = b;
  double rnorm = bnorm;
  while (rnorm / bnorm > cfg.tolerance && res.iterations < cfg.max_iterations) {
    std::vector<CVector> v{r / rnorm};
    CMatrix h = CMatrix::Zero(cycle + 1, cycle);
    std::vector<double> cs(cycle);
    std::vector<Complex> sn(cycle);
    CVector g = CVector::Zero(cycle + 1);
    g[0] = rnorm;

    int j = 0;
    while (j < cycle && res.iterations < cfg.max_iterations) {
      CVector w = a(v[j]);
      ++res.iterations;
      for (int i = 0; i <= j; ++i) {
        h(i, j) = v[i].dot(w);
        w -= h(i, j) * v[i];
      }
      const double wn = w.norm();
      h(j + 1, j) = wn;
      for (int i = 0; i < j; ++i) {
        const Complex t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
        h(i + 1, j) = -std::conj(sn[i]) * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      givens(h(j, j), h(j + 1, j), cs[j], sn[j]);
      h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
      h(j + 1, j) = 0.0;
      g[j + 1] = -std::conj(sn[j]) * g[j];
      g[j] = cs[j] * g[j];
      ++j;
      const double est = std::abs(g[j]) / bnorm;
      res.history.push_back(est);
      if (est <= cfg.tolerance || wn == 0.0) break;
      v.push_back(w / wn);
    }

    const CVector y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
    for (int i = 0; i < j; ++i) res.x += y[i] * v[i];
    r = b - a(res.x);
    rnorm = r.norm();
    if (res.history.back() > cfg.tolerance && j < cycle) break;  // out of iterations
  }
  res.residual = rnorm / bnorm;
  res.converged = res.residual <= cfg.tolerance;
  return res;
}

}  // namespace fdbem
