#pragma once

#include "sonode/session.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace sonode::testing {

// Scripts multi-touch traces at a fixed frame rate. Pointers keep their last position until moved
// or lifted; every frame reports all pointers currently down.
class TraceBuilder {
public:
    explicit TraceBuilder(TimeMs start = 0, TimeMs step_ms = 16) : t_(start), step_(step_ms) {}

    TimeMs now() const { return t_; }

    TraceBuilder& put(const std::string& pid, Vec2 p)
    {
        down_[pid] = p;
        return *this;
    }

    TraceBuilder& lift(const std::string& pid)
    {
        down_.erase(pid);
        return *this;
    }

    TraceBuilder& frame()
    {
        TouchFrame f{t_, {}};
        for (const auto& [pid, p] : down_)
            f.touches.push_back({pid, p});
        records_.push_back(TraceRecord::touches(std::move(f)));
        t_ += step_;
        return *this;
    }

    TraceBuilder& hold(TimeMs ms)
    {
        const TimeMs end = t_ + ms;
        while (t_ < end)
            frame();
        return *this;
    }

    // Straight-line move of one pointer; the others stay where they are.
    TraceBuilder& glide(const std::string& pid, Vec2 to, TimeMs ms)
    {
        const Vec2 from = down_.at(pid);
        const int n = std::max<int>(1, static_cast<int>(ms / step_));
        for (int i = 1; i <= n; ++i) {
            const double s = static_cast<double>(i) / n;
            down_[pid] = from + (to - from) * s;
            frame();
        }
        return *this;
    }

    // Moves along a circular arc; angles in screen coordinates (y down).
    TraceBuilder& orbit(const std::string& pid, Vec2 centre, double radius, double from, double sweep, TimeMs ms)
    {
        const int n = std::max<int>(1, static_cast<int>(ms / step_));
        for (int i = 1; i <= n; ++i) {
            const double a = from + sweep * static_cast<double>(i) / n;
            down_[pid] = centre + Vec2{radius * std::cos(a), radius * std::sin(a)};
            frame();
        }
        return *this;
    }

    TraceBuilder& say(const std::string& text)
    {
        records_.push_back(TraceRecord::say(t_, text));
        return *this;
    }

    const std::vector<TraceRecord>& records() const { return records_; }

private:
    TimeMs t_;
    TimeMs step_;
    std::map<std::string, Vec2> down_;
    std::vector<TraceRecord> records_;
};

} // namespace sonode::testing
