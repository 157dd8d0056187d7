#include "gst/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace gst {

Rational parse_rational(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::runtime_error("parse_rational: empty token");
    try {
        const auto slash = t.find('/');
        if (slash == std::string::npos) {
            // Accept plain decimals like "0.25" as exact rationals.
            const auto dot = t.find('.');
            if (dot == std::string::npos) return Rational(boost::multiprecision::cpp_int(t));
            bool negative = false;
            std::string body = t;
            if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
                negative = body[0] == '-';
                body = body.substr(1);
            }
            const auto d = body.find('.');
            std::string digits = body.substr(0, d) + body.substr(d + 1);
            const auto first = digits.find_first_not_of('0');
            digits = first == std::string::npos ? "0" : digits.substr(first);
            boost::multiprecision::cpp_int den = 1;
            for (size_t i = 0; i < body.size() - d - 1; ++i) den *= 10;
            Rational r(boost::multiprecision::cpp_int(digits), den);
            return negative ? -r : r;
        }
        return Rational(boost::multiprecision::cpp_int(t.substr(0, slash)),
                        boost::multiprecision::cpp_int(t.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::runtime_error("parse_rational: cannot parse '" + s + "'");
    }
}

RatVec parse_rational_vector(const std::string& s) {
    RatVec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_rational(tok));
    return out;
}

}  // namespace gst
