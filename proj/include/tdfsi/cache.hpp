// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_CACHE_HPP
#define TDFSI_CACHE_HPP

#include <cstdint>
#include <string>

#include "tdfsi/tdbem.hpp"

namespace tdfsi
{

// On-disk cache of retarded-potential lag matrices, one file per
// (mesh level, dt, family, lag, options hash). Layout is described in
// docs/cache_format.md.
struct CacheKey
{
  int n = 0;
  double dt = 0.0;
  Family family = Family::V;
  int lag = 0;
  std::uint64_t hash = 0;
};

inline constexpr std::uint32_t kCacheVersion = 1;

std::string cache_directory(const std::string &root, int n, double dt, std::uint64_t hash);
std::string cache_path(const std::string &root, const CacheKey &key);

// False if the file is absent; throws Io on a corrupt file or a header that
// does not match the key or the expected size.
bool load_cached(const std::string &root, const CacheKey &key, int rows, DenseMatrix &out);
void store_cached(const std::string &root, const CacheKey &key, const DenseMatrix &m);

struct CacheStats
{
  int hits = 0;
  int misses = 0;
};

// assemble_sequence with a read-through cache. An empty root disables caching.
RetardedMatrixSequence cached_sequence(const VolumeMesh &mesh, const SurfaceMesh &surf,
                                       double dt, int num_steps, const BemOptions &opt,
                                       const std::string &root, CacheStats *cstats = nullptr,
                                       AssemblyStats *stats = nullptr,
                                       const ProgressFn &progress = {});

}  // namespace tdfsi

#endif  // TDFSI_CACHE_HPP
