#include "gridpart/striping.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <string>

namespace gridpart {

std::int64_t isqrt_floor(std::int64_t x) {
  if (x < 0) throw Error("square root of a negative integer");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

std::int64_t isqrt_ceil(std::int64_t x) {
  const std::int64_t r = isqrt_floor(x);
  return r * r == x ? r : r + 1;
}

std::int64_t min_perimeter_square(std::int64_t cells) {
  if (cells < 1) throw Error("polyomino size must be at least 1");
  // ceil(2*sqrt(A)) = ceil(sqrt(4A))
  return 2 * isqrt_ceil(4 * cells);
}

std::int64_t min_perimeter_hex(std::int64_t cells) {
  if (cells < 1) throw Error("polyhex size must be at least 1");
  return 2 * isqrt_ceil(12 * cells - 3);
}

std::int64_t cut_lower_bound(std::int64_t m, std::int64_t n, std::int64_t k) {
  if (m < 1 || n < 1 || k < 1) throw Error("grid size and k must be positive");
  if (k > m * n) throw Error("k exceeds the number of cells");
  const std::int64_t cells = m * n / k;
  const std::int64_t bound = k * isqrt_ceil(4 * cells) - 2 * (m + n);
  return bound > 0 ? bound : 0;
}

bool lemma_uniform_check(std::int64_t cells, std::int64_t h) {
  if (cells < 1) throw Error("A must be positive");
  const std::int64_t a = isqrt_floor(cells);
  if (a * a == cells) throw Error("A is a perfect square; the lemma needs sqrt(A) > a");
  if (h != a && h != a + 1) throw Error("h must be floor(sqrt(A)) or floor(sqrt(A))+1");
  // A/h + h <= c  <=>  A + h^2 <= c*h, evaluated exactly in integers.
  const std::int64_t c = isqrt_ceil(4 * cells);
  return cells + h * h <= c * h;
}

StripePlan stripe_plan(int m, int n, int k) {
  if (m < 1 || n < 1 || k < 1) throw Error("m, n and k must be positive");
  const std::int64_t cells = static_cast<std::int64_t>(m) * n;
  if (k > cells) throw Error("precondition A = floor(mn/k) >= 1 failed: k > mn");
  if (n < m) throw Error("precondition n >= m failed");
  StripePlan plan;
  plan.part_size = cells / k;
  plan.extras = cells % k;
  plan.a = static_cast<int>(isqrt_floor(plan.part_size));
  if (m < plan.a) {
    throw Error("precondition m >= a failed: m=" + std::to_string(m) +
                ", a=floor(sqrt(A))=" + std::to_string(plan.a));
  }
  plan.d = m / plan.a;
  plan.r = m % plan.a;
  const int slack = static_cast<int>(std::floor(plan.a / kPhi));
  if (plan.r <= plan.d) {
    // r strips of height a+1 and d-r of height a fill m exactly.
    plan.strip_heights.assign(plan.r, plan.a + 1);
    plan.strip_heights.insert(plan.strip_heights.end(), plan.d - plan.r, plan.a);
  } else if (plan.r > slack) {
    plan.strip_heights.assign(plan.d, plan.a);
    plan.s2_height = plan.r;
  } else {
    plan.strip_heights.assign(plan.d - 1, plan.a);
    plan.s2_height = plan.a + plan.r;
  }
  return plan;
}

namespace {

// Hands out part ids in creation order; the first `extras` parts get A+1.
class PartFiller {
 public:
  PartFiller(std::vector<int>& assignment, const StripePlan& plan)
      : assignment_(assignment), plan_(plan) {}

  std::int64_t next_size() const {
    return plan_.part_size + (next_id_ < plan_.extras ? 1 : 0);
  }

  void feed(int v) {
    if (need_ == 0) {
      need_ = next_size();
      current_ = next_id_++;
    }
    assignment_[v] = current_;
    --need_;
  }

  int parts() const { return next_id_; }
  bool open() const { return need_ > 0; }
  int current() const { return current_; }
  std::int64_t pending() const { return need_; }
  std::int64_t size_of(int id) const { return plan_.part_size + (id < plan_.extras ? 1 : 0); }

 private:
  std::vector<int>& assignment_;
  const StripePlan& plan_;
  int next_id_ = 0;
  int current_ = -1;
  std::int64_t need_ = 0;
};

struct RowPiece {
  int part;
  int first;  // offsets from the row's starting end
  int last;
};

// Column span of a piece when its row (cells [left, n-1]) runs in the
// given direction.
std::pair<int, int> piece_columns(const RowPiece& p, int left, int n, bool left_to_right) {
  if (left_to_right) return {left + p.first, left + p.last};
  return {n - 1 - p.last, n - 1 - p.first};
}

std::vector<bool> choose_row_directions(const std::vector<int>& assignment, int n, int rows,
                                        const PartFiller& filler, bool open_part_needs_s2) {
  std::vector<int> left(rows, n);
  std::vector<std::vector<RowPiece>> pieces(rows);
  int current = filler.current();
  std::int64_t need = filler.pending();
  int next = filler.parts();
  for (int row = 0; row < rows; ++row) {
    int width = 0;
    for (int col = n - 1; col >= 0 && assignment[row * n + col] < 0; --col) ++width;
    left[row] = n - width;
    for (int col = 0; col < left[row]; ++col) {
      if (assignment[row * n + col] < 0) throw Error("leftover striping region is not right-aligned");
    }
    for (int offset = 0; offset < width;) {
      if (need == 0) {
        current = next++;
        need = filler.size_of(current);
      }
      const int take = static_cast<int>(std::min<std::int64_t>(need, width - offset));
      pieces[row].push_back({current, offset, offset + take - 1});
      need -= take;
      offset += take;
    }
  }
  const bool open_at_end = need > 0;

  // compatible(r, d, d') : the part shared by rows r and r+1 stays connected.
  auto compatible = [&](int row, bool dir, bool next_dir) {
    if (pieces[row].empty() || pieces[row + 1].empty()) return true;
    const RowPiece& above = pieces[row].back();
    const RowPiece& below = pieces[row + 1].front();
    if (above.part != below.part) return true;
    const auto [a0, a1] = piece_columns(above, left[row], n, dir);
    const auto [b0, b1] = piece_columns(below, left[row + 1], n, next_dir);
    return std::max(a0, b0) <= std::min(a1, b1);
  };
  // A part that skips an empty row can never be connected.
  for (int row = 1; row + 1 < rows; ++row) {
    if (pieces[row].empty() && !pieces[row - 1].empty() && !pieces[row + 1].empty() &&
        pieces[row - 1].back().part == pieces[row + 1].front().part) {
      throw Error("striping left an empty row inside a part");
    }
  }

  // feasible[r][d]: rows r.. can be oriented given row r runs in direction d.
  std::vector<std::array<bool, 2>> feasible(rows);
  for (int row = rows - 1; row >= 0; --row) {
    for (int d = 0; d < 2; ++d) {
      bool ok;
      if (row == rows - 1) {
        ok = true;
        if (open_at_end && open_part_needs_s2 && !pieces[row].empty()) {
          ok = piece_columns(pieces[row].back(), left[row], n, d == 1).second == n - 1;
        }
      } else {
        ok = (compatible(row, d == 1, false) && feasible[row + 1][0]) ||
             (compatible(row, d == 1, true) && feasible[row + 1][1]);
      }
      feasible[row][d] = ok;
    }
  }

  // Prefer the plain boustrophedon whose bottom row runs left to right.
  std::vector<bool> left_to_right(rows);
  for (int row = 0; row < rows; ++row) {
    const bool preferred = row == 0 ? (rows - 1 - row) % 2 == 0 : !left_to_right[row - 1];
    auto allowed = [&](bool d) {
      return feasible[row][d] && (row == 0 || compatible(row - 1, left_to_right[row - 1], d));
    };
    if (allowed(preferred)) {
      left_to_right[row] = preferred;
    } else if (allowed(!preferred)) {
      left_to_right[row] = !preferred;
    } else {
      throw Error("no row orientation keeps the leftover striping region contiguous");
    }
  }
  return left_to_right;
}

// `holdback` parts per strip are returned from Step 2 to R.
std::vector<int> stripe_oriented(int m, int n, int k, int holdback) {
  const StripePlan plan = stripe_plan(m, n, k);
  std::vector<int> assignment(static_cast<std::size_t>(m) * n, -1);
  PartFiller filler(assignment, plan);
  const int stop_cols = static_cast<int>(std::ceil(kPhi * plan.a));

  // Step 2: top-to-bottom striping inside each S1 strip, leaving between
  // floor(a/phi) and ceil(phi*a) complete columns unpartitioned.
  int top = 0;
  for (int h : plan.strip_heights) {
    const std::int64_t capacity = static_cast<std::int64_t>(h) * n;
    std::int64_t used = 0;
    std::vector<std::int64_t> sizes;
    while (n - (used + h - 1) / h > stop_cols) {
      const std::int64_t size = plan.part_size + (filler.parts() + std::ssize(sizes) < plan.extras);
      if (used + size > capacity) break;
      sizes.push_back(size);
      used += size;
    }
    sizes.resize(std::max<std::ptrdiff_t>(0, std::ssize(sizes) - holdback));
    used = 0;
    for (std::int64_t size : sizes) {
      for (std::int64_t t = used; t < used + size; ++t) {
        filler.feed(static_cast<int>((top + t % h) * n + t / h));
      }
      used += size;
    }
    top += h;
  }
  const int s1_rows = top;

  // Step 3: the leftover region R, row by row. Which cells of each row
  // go to which part is fixed by the counts; only the direction of every
  // row is free. Directions are chosen so that each part's piece in a row
  // overlaps its piece in the row above, and so that a part left open for
  // S2 reaches the right end of the bottom row.
  const std::vector<bool> left_to_right =
      choose_row_directions(assignment, n, s1_rows, filler, plan.s2_height > 0);
  for (int row = 0; row < s1_rows; ++row) {
    for (int step = 0; step < n; ++step) {
      const int col = left_to_right[row] ? step : n - 1 - step;
      const int v = row * n + col;
      if (assignment[v] < 0) filler.feed(v);
    }
  }

  // Step 4: S2 column by column from the right, each column top to bottom,
  // finishing the open part of R first.
  for (int col = n - 1; col >= 0; --col) {
    for (int row = s1_rows; row < m; ++row) filler.feed(row * n + col);
  }

  if (filler.open() || filler.parts() != k) {
    throw Error("striping produced " + std::to_string(filler.parts()) + " parts, expected " +
                std::to_string(k));
  }
  return assignment;
}

std::vector<int> stripe_any_holdback(int m, int n, int k) {
  const int attempts = 4;
  for (int holdback = 0;; ++holdback) {
    try {
      return stripe_oriented(m, n, k, holdback);
    } catch (const Error&) {
      if (holdback + 1 == attempts) throw;
    }
  }
}

}  // namespace

std::vector<int> phi_cautious_striping(int m, int n, int k) {
  if (m <= n) return stripe_any_holdback(m, n, k);
  const std::vector<int> t = stripe_any_holdback(n, m, k);
  std::vector<int> out(static_cast<std::size_t>(m) * n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) out[r * n + c] = t[c * m + r];
  }
  return out;
}

Partition phi_cautious_striping(const GridGraph& g, int k) {
  return Partition(g, phi_cautious_striping(g.rows(), g.cols(), k), k);
}

}  // namespace gridpart
