#pragma once

// Compressor-based nearest-neighbor classification.
//
//   NCD(x, y) = (C(x ' ' y) - min(C(x), C(y))) / max(C(x), C(y))
//
// C is the byte length of the compressed stream. With the default raw
// DEFLATE compressor no container header or checksum is counted.

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dzhate/corpus.hpp"
#include "dzhate/error.hpp"

namespace dzhate::ncd {

enum class Compressor { deflate, zlib, gzip };

inline constexpr std::string_view to_string(Compressor c) {
  switch (c) {
    case Compressor::deflate: return "deflate";
    case Compressor::zlib: return "zlib";
    case Compressor::gzip: return "gzip";
  }
  return "deflate";
}

inline std::optional<Compressor> parse_compressor(std::string_view s) {
  if (s == "deflate") return Compressor::deflate;
  if (s == "zlib") return Compressor::zlib;
  if (s == "gzip") return Compressor::gzip;
  return std::nullopt;
}

inline constexpr int kDefaultLevel = 6;

namespace detail {

inline constexpr int window_bits(Compressor c) {
  switch (c) {
    case Compressor::deflate: return -15;
    case Compressor::zlib: return 15;
    case Compressor::gzip: return 31;
  }
  return -15;
}

// One reusable zlib stream per (thread, compressor, level).
class Deflater {
 public:
  Deflater(Compressor c, int level) {
    if (deflateInit2(&stream_, level, Z_DEFLATED, window_bits(c), 8, Z_DEFAULT_STRATEGY) != Z_OK) {
      throw Error("deflateInit2 failed");
    }
  }
  Deflater(const Deflater&) = delete;
  Deflater& operator=(const Deflater&) = delete;
  ~Deflater() { deflateEnd(&stream_); }

  std::size_t compressed_size(std::string_view data) {
    deflateReset(&stream_);
    const auto bound = deflateBound(&stream_, static_cast<uLong>(data.size()));
    if (buffer_.size() < bound) buffer_.resize(bound);
    stream_.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    stream_.avail_in = static_cast<uInt>(data.size());
    stream_.next_out = buffer_.data();
    stream_.avail_out = static_cast<uInt>(buffer_.size());
    if (deflate(&stream_, Z_FINISH) != Z_STREAM_END) throw Error("deflate did not finish");
    return buffer_.size() - stream_.avail_out;
  }

 private:
  z_stream stream_{};
  std::vector<Bytef> buffer_;
};

inline Deflater& thread_deflater(Compressor c, int level) {
  // index = compressor * 10 + level, levels 0..9
  thread_local std::array<std::unique_ptr<Deflater>, 30> cache;
  auto& slot = cache[static_cast<std::size_t>(c) * 10 + static_cast<std::size_t>(level)];
  if (!slot) slot = std::make_unique<Deflater>(c, level);
  return *slot;
}

}  // namespace detail

inline std::size_t compressed_len(std::string_view bytes, Compressor compressor = Compressor::deflate,
                                  int level = kDefaultLevel) {
  if (level < 0 || level > 9) throw Error("compression level must be in 0..9");
  return detail::thread_deflater(compressor, level).compressed_size(bytes);
}

struct NcdParams {
  Compressor compressor = Compressor::deflate;
  int level = kDefaultLevel;
};

inline double ncd_from_lengths(std::size_t cx, std::size_t cy, std::size_t cxy) {
  const double lo = static_cast<double>(std::min(cx, cy));
  const double hi = static_cast<double>(std::max(cx, cy));
  return std::max(0.0, (static_cast<double>(cxy) - lo) / hi);
}

inline std::string concat(std::string_view x, std::string_view y) {
  std::string xy;
  xy.reserve(x.size() + y.size() + 1);
  xy.append(x);
  xy.push_back(' ');
  xy.append(y);
  return xy;
}

inline double ncd(std::string_view x, std::string_view y, const NcdParams& p = {}) {
  if (x.empty() && y.empty()) throw Error("NCD of two empty inputs is undefined");
  const auto cx = compressed_len(x, p.compressor, p.level);
  const auto cy = compressed_len(y, p.compressor, p.level);
  return ncd_from_lengths(cx, cy, compressed_len(concat(x, y), p.compressor, p.level));
}

struct IndexEntry {
  std::string doc_id;
  std::string text;
  Label label = Label::non_hateful;
  std::size_t compressed = 0;

  bool operator==(const IndexEntry&) const = default;
};

class NcdIndex {
 public:
  NcdIndex() = default;

  static NcdIndex build(const Corpus& train, const NcdParams& params = {}) {
    if (train.empty()) throw Error("cannot build an index from an empty corpus");
    NcdIndex idx;
    idx.params_ = params;
    idx.entries_.reserve(train.size());
    for (const auto& d : train) {
      if (!d.label) throw Error("unlabeled document \"" + d.id + "\"");
      if (!d.clean_text) throw Error("document \"" + d.id + "\" has no clean_text");
      idx.entries_.push_back({d.id, *d.clean_text, *d.label,
                              compressed_len(*d.clean_text, params.compressor, params.level)});
    }
    return idx;
  }

  const std::vector<IndexEntry>& entries() const { return entries_; }
  const NcdParams& params() const { return params_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const NcdIndex& o) const {
    return entries_ == o.entries_ && params_.compressor == o.params_.compressor && params_.level == o.params_.level;
  }

 private:
  std::vector<IndexEntry> entries_;
  NcdParams params_;
};

inline NcdIndex build_index(const Corpus& train, Compressor compressor = Compressor::deflate,
                            int level = kDefaultLevel) {
  return NcdIndex::build(train, {compressor, level});
}

// Distances from `query` (placed first in the concatenation) to every entry.
// `threads` 0 picks hardware concurrency; the result does not depend on it.
inline std::vector<double> distances(const NcdIndex& index, std::string_view query, unsigned threads = 1,
                                     std::size_t skip = std::numeric_limits<std::size_t>::max()) {
  const auto& p = index.params();
  const auto& entries = index.entries();
  const std::size_t cq = compressed_len(query, p.compressor, p.level);
  std::vector<double> out(entries.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (i == skip) continue;
      const auto& e = entries[i];
      out[i] = ncd_from_lengths(cq, e.compressed, compressed_len(concat(query, e.text), p.compressor, p.level));
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, entries.size()));
  if (threads <= 1) {
    work(0, entries.size());
    return out;
  }
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (entries.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(entries.size(), b + chunk);
      if (b >= e) break;
      pool.emplace_back(work, b, e);
    }
  }
  return out;
}

struct KnnResult {
  Label label = Label::non_hateful;
  std::vector<std::string> neighbor_ids;
  std::vector<double> distances;
};

struct KnnOptions {
  std::size_t k = 3;
  unsigned threads = 1;
  // Leave-one-out: exclude this entry position from the neighbor search.
  std::size_t exclude = std::numeric_limits<std::size_t>::max();
};

inline KnnResult knn_from_distances(const NcdIndex& index, const std::vector<double>& dist, std::size_t k,
                                    std::size_t exclude = std::numeric_limits<std::size_t>::max()) {
  const auto& entries = index.entries();
  std::vector<std::size_t> order;
  order.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i != exclude) order.push_back(i);
  }
  if (k < 1 || k > order.size()) throw Error("k must be in 1..index size");
  auto closer = [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return entries[a].doc_id < entries[b].doc_id;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), closer);

  KnnResult r;
  std::array<std::size_t, 2> votes{0, 0};
  std::array<double, 2> sums{0, 0};
  for (std::size_t n = 0; n < k; ++n) {
    const auto& e = entries[order[n]];
    r.neighbor_ids.push_back(e.doc_id);
    r.distances.push_back(dist[order[n]]);
    ++votes[to_int(e.label)];
    sums[to_int(e.label)] += dist[order[n]];
  }
  if (votes[1] > votes[0]) {
    r.label = Label::hateful;
  } else if (votes[1] == votes[0] && sums[1] < sums[0]) {
    r.label = Label::hateful;
  } else {
    r.label = Label::non_hateful;
  }
  return r;
}

inline KnnResult knn_classify(const NcdIndex& index, std::string_view query, const KnnOptions& opt) {
  if (query.empty()) throw Error("empty document");
  return knn_from_distances(index, distances(index, query, opt.threads, opt.exclude), opt.k, opt.exclude);
}

inline KnnResult knn_classify(const NcdIndex& index, std::string_view query, std::size_t k = 3) {
  return knn_classify(index, query, KnnOptions{k});
}

// Picks k from `candidates` by accuracy on a labeled validation corpus; the
// smaller k wins ties. Distances are computed once per query.
inline std::size_t select_k(const NcdIndex& index, const Corpus& validation,
                            const std::vector<std::size_t>& candidates = {1, 3, 5, 7}, unsigned threads = 1) {
  if (candidates.empty()) throw Error("no candidate k values");
  std::vector<std::size_t> correct(candidates.size(), 0);
  for (const auto& d : validation) {
    if (!d.label || !d.clean_text || d.clean_text->empty()) continue;
    const auto dist = distances(index, *d.clean_text, threads);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (candidates[c] > index.size()) continue;
      if (knn_from_distances(index, dist, candidates[c]).label == *d.label) ++correct[c];
    }
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (candidates[c] > index.size()) continue;
    if (correct[c] > correct[best] || (correct[c] == correct[best] && candidates[c] < candidates[best])) best = c;
  }
  return candidates[best];
}

}  // namespace dzhate::ncd
