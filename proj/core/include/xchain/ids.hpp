#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace xchain {

// Unique blockchain number within one simulation.
struct ChainId {
    std::uint32_t value{};

    constexpr ChainId() = default;
    constexpr explicit ChainId(std::uint32_t v) : value(v) {}

    constexpr auto operator<=>(const ChainId&) const = default;
};

// Transaction encoding used by one blockchain. Bijective with ChainId in a scenario.
struct FormatId {
    std::uint32_t value{};

    constexpr FormatId() = default;
    constexpr explicit FormatId(std::uint32_t v) : value(v) {}

    constexpr auto operator<=>(const FormatId&) const = default;
};

inline std::string to_string(ChainId id) { return std::to_string(id.value); }
inline std::string to_string(FormatId id) { return std::to_string(id.value); }

// Simulation time unit. One tick corresponds to one second of the modeled network.
using Tick = std::uint64_t;

}  // namespace xchain

template <>
struct std::hash<xchain::ChainId> {
    std::size_t operator()(xchain::ChainId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};

template <>
struct std::hash<xchain::FormatId> {
    std::size_t operator()(xchain::FormatId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
