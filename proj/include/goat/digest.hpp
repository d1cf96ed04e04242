#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>

namespace goat {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

/// 64-bit FNV-1a, chainable through `seed`.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = kFnvOffset) noexcept;

/// FNV-1a of a file's contents. Throws IoError when unreadable.
std::uint64_t file_digest(const std::filesystem::path& path);

}  // namespace goat
