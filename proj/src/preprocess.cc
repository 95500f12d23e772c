/*
 * Copyright 2026 The poialias Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "poialias/preprocess.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "poialias/error.h"

namespace poialias {

namespace {

void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool IsSpace(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\v' || cp == U'\f' || cp == 0x00A0 || cp == 0x3000;
}

bool IsAsciiPunct(char32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

bool IsCjkPunct(char32_t cp) {
  return cp == 0x3001 || cp == 0x3002 || cp == 0x3010 || cp == 0x3011;
}

// Edit distance if it is <= bound, otherwise bound + 1. Only the diagonal
// band of width 2 * bound + 1 is evaluated.
std::size_t BoundedLevenshtein(std::u32string_view a, std::u32string_view b,
                               std::size_t bound) {
  if (a.size() < b.size()) std::swap(a, b);
  const std::size_t la = a.size(), lb = b.size();
  const std::size_t over = bound + 1;
  if (la - lb > bound) return over;
  if (lb == 0) return la;

  std::vector<std::size_t> prev(lb + 1, over), cur(lb + 1, over);
  for (std::size_t j = 0; j <= std::min(lb, bound); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= la; ++i) {
    const std::size_t jlo = i > bound ? i - bound : 1;
    const std::size_t jhi = std::min(lb, i + bound);
    std::fill(cur.begin(), cur.end(), over);
    if (i <= bound) cur[0] = i;
    std::size_t row_min = cur[0];
    for (std::size_t j = jlo; j <= jhi; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      const std::size_t del = prev[j] + 1;
      const std::size_t ins = cur[j - 1] + 1;
      cur[j] = std::min({sub, del, ins, over});
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > bound) return over;
    std::swap(prev, cur);
  }
  return std::min(prev[lb], over);
}

// Largest edit count d with d / max_len <= threshold, evaluated with the same
// double division NormalizedEditDistance uses. -1 when even d = 0 fails.
long AllowedEdits(std::size_t max_len, double threshold) {
  if (max_len == 0) return threshold >= 0.0 ? 0 : -1;
  const double m = static_cast<double>(max_len);
  long k = static_cast<long>(std::floor(threshold * m));
  k = std::clamp<long>(k, -1, static_cast<long>(max_len));
  while (k + 1 <= static_cast<long>(max_len) &&
         static_cast<double>(k + 1) / m <= threshold) {
    ++k;
  }
  while (k >= 0 && static_cast<double>(k) / m > threshold) --k;
  return k;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      ++i;
      continue;
    }
    if (i + len > text.size()) break;
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string CleanText(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char32_t cp : DecodeUtf8(raw)) {
    if (IsSpace(cp)) continue;
    if (cp >= 0xFF01 && cp <= 0xFF5E) cp -= 0xFEE0;
    if (IsAsciiPunct(cp) || IsCjkPunct(cp)) continue;
    if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
    AppendUtf8(out, cp);
  }
  return out;
}

std::size_t Levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t Levenshtein(std::string_view a, std::string_view b) {
  return Levenshtein(DecodeUtf8(a), DecodeUtf8(b));
}

double NormalizedEditDistance(std::string_view a, std::string_view b) {
  const std::u32string ua = DecodeUtf8(a), ub = DecodeUtf8(b);
  const std::size_t m = std::max(ua.size(), ub.size());
  if (m == 0) return 0.0;
  return static_cast<double>(Levenshtein(ua, ub)) / static_cast<double>(m);
}

const std::string& CanonicalMap::Resolve(const std::string& raw) const {
  const auto it = mapping.find(raw);
  return it == mapping.end() ? raw : it->second;
}

CanonicalMap ClusterNearDuplicates(
    const std::vector<std::pair<std::string, std::size_t>>& names,
    double threshold) {
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cluster threshold must lie in [0, 1]");
  }
  std::map<std::string, std::size_t> freq;
  for (const auto& [name, count] : names) freq[name] += count;

  std::vector<std::string> ids;
  std::vector<std::u32string> text;
  ids.reserve(freq.size());
  for (const auto& [name, count] : freq) {
    ids.push_back(name);
    text.push_back(DecodeUtf8(name));
  }
  const std::size_t n = ids.size();

  // Bigram tokens, with repeated bigrams numbered so that counting shared
  // tokens yields the multiset intersection size.
  std::map<std::pair<std::u32string, std::size_t>, std::vector<std::size_t>>
      postings;
  std::vector<std::vector<const std::vector<std::size_t>*>> tokens_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::u32string, std::size_t> seen;
    const auto& s = text[i];
    for (std::size_t p = 0; p + 1 < s.size(); ++p) {
      std::u32string gram = s.substr(p, 2);
      const std::size_t occ = seen[gram]++;
      postings[{std::move(gram), occ}].push_back(i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::u32string, std::size_t> seen;
    const auto& s = text[i];
    for (std::size_t p = 0; p + 1 < s.size(); ++p) {
      std::u32string gram = s.substr(p, 2);
      const std::size_t occ = seen[gram]++;
      tokens_of[i].push_back(&postings.at({std::move(gram), occ}));
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> by_length;
  for (std::size_t i = 0; i < n; ++i) by_length[text[i].size()].push_back(i);

  // Minimum shared bigrams for a pair within `edits` edits; <= 0 means the
  // filter cannot prune and the pair is verified directly.
  auto required_shared = [](std::size_t max_len, long edits) {
    return static_cast<long>(max_len) - 1 - 2 * edits;
  };

  DisjointSets sets(n);
  std::vector<long> shared(n, 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t li = text[i].size();

    for (const auto& [len, members] : by_length) {
      const std::size_t m = std::max(li, len);
      const long k = AllowedEdits(m, threshold);
      if (k < 0) continue;
      const std::size_t gap = li > len ? li - len : len - li;
      if (static_cast<long>(gap) > k) continue;
      if (required_shared(m, k) > 0) continue;
      for (std::size_t j : members) {
        if (j <= i) continue;
        if (BoundedLevenshtein(text[i], text[j], static_cast<std::size_t>(k)) <=
            static_cast<std::size_t>(k)) {
          sets.Union(i, j);
        }
      }
    }

    for (const auto* list : tokens_of[i]) {
      for (auto it = std::upper_bound(list->begin(), list->end(), i);
           it != list->end(); ++it) {
        if (shared[*it]++ == 0) touched.push_back(*it);
      }
    }
    for (std::size_t j : touched) {
      const std::size_t lj = text[j].size();
      const std::size_t m = std::max(li, lj);
      const long k = AllowedEdits(m, threshold);
      const std::size_t gap = li > lj ? li - lj : lj - li;
      const long need = required_shared(m, k);
      if (k >= 0 && static_cast<long>(gap) <= k && need > 0 &&
          shared[j] >= need &&
          BoundedLevenshtein(text[i], text[j], static_cast<std::size_t>(k)) <=
              static_cast<std::size_t>(k)) {
        sets.Union(i, j);
      }
      shared[j] = 0;
    }
    touched.clear();
  }

  std::vector<std::size_t> best(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.Find(i);
    const std::size_t cur = best[root];
    // ids are in lexicographic order, so the first maximum wins ties.
    if (cur == n || freq.at(ids[i]) > freq.at(ids[cur])) best[root] = i;
  }
  CanonicalMap out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& canonical = ids[best[sets.Find(i)]];
    out.mapping.emplace(ids[i], canonical);
    ++out.cluster_sizes[canonical];
  }
  return out;
}

}  // namespace poialias
