#include "featrange/lp.hpp"

#include <stdexcept>

namespace featrange {
namespace {

// Dictionary form: basic[r] = cst[r] + sum_k T[r][k] * nonbasic[k].
// Variable ids: [0, n) structural (free), [n, n+m) slacks, n+m auxiliary.
class Dictionary {
 public:
  Dictionary(size_t n, const std::vector<LinCon>& cons) : n_(n) {
    std::vector<const LinCon*> rows;
    std::vector<int> signs;
    for (const auto& c : cons) {
      if (c.a.size() != n) throw std::invalid_argument("dimension mismatch");
      rows.push_back(&c);
      signs.push_back(1);
      if (c.rel == Rel::Eq) {
        rows.push_back(&c);
        signs.push_back(-1);
      }
    }
    m_ = rows.size();
    aux_ = static_cast<int>(n_ + m_);
    ncols_ = n_ + 1;
    T_.assign(m_, std::vector<Rational>(ncols_));
    cst_.resize(m_);
    basic_.resize(m_);
    nonbasic_.resize(ncols_);
    for (size_t j = 0; j < n_; ++j) nonbasic_[j] = static_cast<int>(j);
    nonbasic_[n_] = aux_;
    for (size_t i = 0; i < m_; ++i) {
      const auto& c = *rows[i];
      for (size_t j = 0; j < n_; ++j)
        if (c.a[j] != 0) T_[i][j] = signs[i] > 0 ? Rational(-c.a[j]) : c.a[j];
      T_[i][n_] = 1;
      cst_[i] = signs[i] > 0 ? c.b : Rational(-c.b);
      basic_[i] = static_cast<int>(n_ + i);
    }
    obj_.assign(ncols_, Rational(0));
    dead_.assign(ncols_, 0);
  }

  bool is_free(int id) const { return id < static_cast<int>(n_); }

  // Returns false when infeasible.
  bool phase1() {
    size_t worst = m_;
    for (size_t i = 0; i < m_; ++i)
      if (cst_[i] < 0 && (worst == m_ || cst_[i] < cst_[worst])) worst = i;
    if (worst == m_) {
      drop_aux();
      return true;
    }
    pivot(worst, n_);
    // maximize -aux
    std::fill(obj_.begin(), obj_.end(), Rational(0));
    obj_cst_ = 0;
    set_objective_from_row(aux_, -1);
    run(true);
    if (obj_cst_ < 0) return false;
    // aux may still be basic at value 0
    for (size_t i = 0; i < m_; ++i) {
      if (basic_[i] != aux_) continue;
      size_t col = ncols_;
      for (size_t k = 0; k < ncols_; ++k)
        if (!dead_[k] && T_[i][k] != 0) {
          col = k;
          break;
        }
      if (col == ncols_) {
        remove_row(i);
      } else {
        pivot(i, col);
      }
      break;
    }
    drop_aux();
    return true;
  }

  // Returns false when unbounded.
  bool phase2(const std::vector<Rational>& c) {
    std::fill(obj_.begin(), obj_.end(), Rational(0));
    obj_cst_ = 0;
    for (size_t j = 0; j < n_; ++j) {
      if (c[j] == 0) continue;
      bool found = false;
      for (size_t i = 0; i < m_; ++i)
        if (basic_[i] == static_cast<int>(j)) {
          set_objective_from_row_index(i, c[j]);
          found = true;
          break;
        }
      if (!found)
        for (size_t k = 0; k < ncols_; ++k)
          if (nonbasic_[k] == static_cast<int>(j)) {
            obj_[k] += c[j];
            break;
          }
    }
    return run(false);
  }

  Rational objective() const { return obj_cst_; }

  std::vector<Rational> point() const {
    std::vector<Rational> x(n_);
    for (size_t i = 0; i < m_; ++i)
      if (is_free(basic_[i])) x[basic_[i]] = cst_[i];
    return x;
  }

 private:
  void drop_aux() {
    for (size_t k = 0; k < ncols_; ++k)
      if (nonbasic_[k] == aux_) {
        dead_[k] = true;
        for (size_t i = 0; i < m_; ++i) T_[i][k] = 0;
        obj_[k] = 0;
      }
  }

  void remove_row(size_t i) {
    T_.erase(T_.begin() + static_cast<long>(i));
    cst_.erase(cst_.begin() + static_cast<long>(i));
    basic_.erase(basic_.begin() + static_cast<long>(i));
    --m_;
  }

  void set_objective_from_row(int var, int coef) {
    for (size_t i = 0; i < m_; ++i)
      if (basic_[i] == var) {
        set_objective_from_row_index(i, Rational(coef));
        return;
      }
  }

  void set_objective_from_row_index(size_t i, const Rational& coef) {
    Rational tmp;
    for (size_t k = 0; k < ncols_; ++k)
      if (T_[i][k] != 0) {
        tmp = coef * T_[i][k];
        obj_[k] += tmp;
      }
    obj_cst_ += coef * cst_[i];
  }

  // Simplex iterations maximizing the objective row. Returns false when unbounded.
  bool run(bool phase_one) {
    size_t degenerate = 0;
    std::vector<size_t> nz;
    for (;;) {
      bool bland = degenerate > 50;
      size_t enter = ncols_;
      int dir = 0;
      Rational best;
      for (size_t k = 0; k < ncols_; ++k) {
        if (dead_[k]) continue;
        const Rational& d = obj_[k];
        if (d == 0) continue;
        int var = nonbasic_[k];
        int kdir;
        if (is_free(var))
          kdir = sgn(d);
        else if (d > 0)
          kdir = 1;
        else
          continue;
        if (bland) {
          if (enter == ncols_ || var < nonbasic_[enter]) {
            enter = k;
            dir = kdir;
          }
        } else {
          Rational mag = abs(d);
          if (enter == ncols_ || mag > best) {
            enter = k;
            dir = kdir;
            best = mag;
          }
        }
      }
      if (enter == ncols_) return true;
      size_t leave = m_;
      Rational ratio, r;
      for (size_t i = 0; i < m_; ++i) {
        if (is_free(basic_[i])) continue;
        const Rational& t = T_[i][enter];
        if (t == 0) continue;
        if ((dir > 0 && t >= 0) || (dir < 0 && t <= 0)) continue;
        r = cst_[i] / abs(t);
        if (leave == m_ || r < ratio || (r == ratio && basic_[i] < basic_[leave])) {
          leave = i;
          ratio = r;
        }
      }
      if (leave == m_) {
        if (phase_one) throw std::logic_error("phase one unbounded");
        return false;
      }
      if (ratio == 0)
        ++degenerate;
      else
        degenerate = 0;
      pivot(leave, enter);
    }
  }

  void pivot(size_t r, size_t c) {
    auto& row = T_[r];
    Rational inv = 1 / row[c];
    std::vector<size_t> nz;
    for (size_t k = 0; k < ncols_; ++k) {
      if (k == c || row[k] == 0) continue;
      row[k] *= -inv;
      nz.push_back(k);
    }
    row[c] = inv;
    nz.push_back(c);
    cst_[r] *= -inv;
    std::swap(basic_[r], nonbasic_[c]);
    Rational f, tmp;
    auto update = [&](std::vector<Rational>& other, Rational& ocst) {
      f = other[c];
      if (f == 0) return;
      other[c] = 0;
      for (size_t k : nz) {
        tmp = f * row[k];
        other[k] += tmp;
      }
      tmp = f * cst_[r];
      ocst += tmp;
    };
    for (size_t i = 0; i < m_; ++i)
      if (i != r) update(T_[i], cst_[i]);
    update(obj_, obj_cst_);
  }

  size_t n_, m_ = 0, ncols_ = 0;
  int aux_ = 0;
  std::vector<std::vector<Rational>> T_;
  std::vector<Rational> cst_;
  std::vector<int> basic_, nonbasic_;
  std::vector<Rational> obj_;
  Rational obj_cst_;
  std::vector<char> dead_;
};

}  // namespace

LpResult lp_solve(size_t n, const std::vector<LinCon>& cons, const std::vector<Rational>* obj,
                  bool maximize) {
  LpResult res;
  // constant rows are decided directly
  std::vector<LinCon> rows;
  rows.reserve(cons.size());
  for (const auto& c : cons) {
    bool zero = true;
    for (const auto& v : c.a)
      if (v != 0) {
        zero = false;
        break;
      }
    if (zero) {
      bool ok = c.rel == Rel::Eq ? c.b == 0 : c.b >= 0;
      if (!ok) {
        res.status = LpStatus::Infeasible;
        return res;
      }
      continue;
    }
    rows.push_back(c);
  }
  Dictionary d(n, rows);
  if (!d.phase1()) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  if (obj) {
    if (obj->size() != n) throw std::invalid_argument("dimension mismatch");
    std::vector<Rational> c = *obj;
    if (!maximize)
      for (auto& v : c) v = -v;
    if (!d.phase2(c)) {
      res.status = LpStatus::Unbounded;
      res.x = d.point();
      return res;
    }
    res.value = maximize ? d.objective() : Rational(-d.objective());
  }
  res.status = LpStatus::Optimal;
  res.x = d.point();
  return res;
}

}  // namespace featrange
