#include "bellsim/textutil.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bellsim::text {

namespace {

std::string_view trim(std::string_view view) {
    while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
    while (!view.empty() && (view.back() == ' ' || view.back() == '\t')) view.remove_suffix(1);
    return view;
}

double parse_decimal(std::string_view token) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("invalid number: '" + std::string(token) + "'");
    }
    return value;
}

}  // namespace

double parse_angle(std::string_view token) {
    std::string_view view = trim(token);
    if (view.empty()) throw std::invalid_argument("empty angle");

    double sign = 1.0;
    if (view.front() == '+' || view.front() == '-') {
        sign = (view.front() == '-') ? -1.0 : 1.0;
        view.remove_prefix(1);
    }

    const auto pi_pos = view.find("pi");
    if (pi_pos == std::string_view::npos) {
        return sign * parse_decimal(view);
    }

    double coefficient = 1.0;
    if (pi_pos > 0) coefficient = parse_decimal(view.substr(0, pi_pos));

    double denominator = 1.0;
    std::string_view rest = view.substr(pi_pos + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') {
            throw std::invalid_argument("invalid angle: '" + std::string(token) + "'");
        }
        denominator = parse_decimal(rest.substr(1));
        if (denominator == 0.0) throw std::invalid_argument("zero denominator in angle");
    }
    return sign * coefficient * std::numbers::pi / denominator;
}

std::vector<double> parse_grid(std::string_view token) {
    std::string_view view = trim(token);
    const auto first = view.find(':');
    if (first == std::string_view::npos) {
        return {parse_angle(view)};
    }
    const auto second = view.find(':', first + 1);
    if (second == std::string_view::npos) {
        throw std::invalid_argument("grid must be start:stop:step");
    }
    const double start = parse_angle(view.substr(0, first));
    const double stop = parse_angle(view.substr(first + 1, second - first - 1));
    const double step = parse_angle(view.substr(second + 1));
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (stop < start) throw std::invalid_argument("grid stop must be >= start");

    std::vector<double> values;
    const double slack = step * 1e-9;
    for (std::size_t i = 0;; ++i) {
        const double value = start + static_cast<double>(i) * step;
        if (value > stop + slack) break;
        values.push_back(value);
    }
    return values;
}

std::string format_number(double value) {
    if (value == 0.0) return "0";

    char buffer[64];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    std::string shortest(buffer, end);

    std::size_t significant = 0;
    bool counting = false;
    for (const char c : shortest) {
        if (c == 'e' || c == 'E') break;
        if (c >= '1' && c <= '9') counting = true;
        if (counting && c >= '0' && c <= '9') ++significant;
    }
    if (significant <= 12) return shortest;

    auto [end12, ec12] =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 12);
    return std::string(buffer, end12);
}

}  // namespace bellsim::text
