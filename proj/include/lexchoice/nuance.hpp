#pragma once

#include <array>
#include <optional>
#include <string_view>

// Scales shared by lexicon distinctions and IR possibilities.
namespace lexchoice {

enum class Frequency { never, sometimes, always };
enum class Strength { weak, medium, strong };
// How directly a nuance is conveyed, least direct first.
enum class Conveyance { emphasis, suggestion, implication, denotation };
enum class Level { low, neutral, high };
enum class Attitude { pejorative, neutral, favorable };

namespace detail {

template <class E, std::size_t N>
std::optional<E> lookup(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<E>(i);
  return std::nullopt;
}

inline constexpr std::array<std::string_view, 3> kFrequency{"never", "sometimes", "always"};
inline constexpr std::array<std::string_view, 3> kStrength{"weak", "medium", "strong"};
inline constexpr std::array<std::string_view, 4> kConveyance{"emphasis", "suggestion",
                                                             "implication", "denotation"};
inline constexpr std::array<std::string_view, 3> kLevel{"low", "neutral", "high"};
inline constexpr std::array<std::string_view, 3> kAttitude{"pejorative", "neutral",
                                                           "favorable"};

}  // namespace detail

inline std::string_view to_string(Frequency f) { return detail::kFrequency[static_cast<std::size_t>(f)]; }
inline std::string_view to_string(Strength s) { return detail::kStrength[static_cast<std::size_t>(s)]; }
inline std::string_view to_string(Conveyance c) { return detail::kConveyance[static_cast<std::size_t>(c)]; }
inline std::string_view to_string(Level l) { return detail::kLevel[static_cast<std::size_t>(l)]; }
inline std::string_view to_string(Attitude a) { return detail::kAttitude[static_cast<std::size_t>(a)]; }

inline std::optional<Frequency> parse_frequency(std::string_view s) {
  return detail::lookup<Frequency>(s, detail::kFrequency);
}
inline std::optional<Strength> parse_strength(std::string_view s) {
  return detail::lookup<Strength>(s, detail::kStrength);
}
inline std::optional<Conveyance> parse_conveyance(std::string_view s) {
  return detail::lookup<Conveyance>(s, detail::kConveyance);
}
inline std::optional<Level> parse_level(std::string_view s) {
  return detail::lookup<Level>(s, detail::kLevel);
}
inline std::optional<Attitude> parse_attitude(std::string_view s) {
  return detail::lookup<Attitude>(s, detail::kAttitude);
}

// low = -1, neutral = 0, high = +1
inline int level_value(Level l) { return static_cast<int>(l) - 1; }

}  // namespace lexchoice
