#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace citybrain {

// Opaque string identifier with a tag so neuron/channel/arc ids cannot be mixed up.
template <class Tag>
struct StringId {
    std::string value;

    StringId() = default;
    explicit StringId(std::string v) : value(std::move(v)) {}
    explicit StringId(std::string_view v) : value(v) {}
    explicit StringId(const char* v) : value(v) {}

    bool empty() const { return value.empty(); }

    friend auto operator<=>(const StringId&, const StringId&) = default;
};

using NeuronId = StringId<struct NeuronIdTag>;
using ChannelId = StringId<struct ChannelIdTag>;
using ArcId = StringId<struct ArcIdTag>;

}  // namespace citybrain

template <class Tag>
struct std::hash<citybrain::StringId<Tag>> {
    std::size_t operator()(const citybrain::StringId<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.value);
    }
};
