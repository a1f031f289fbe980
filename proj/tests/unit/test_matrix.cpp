#include <catch2/catch_amalgamated.hpp>

#include "netdiscern/matrix.hpp"

using namespace netdiscern;

TEST_CASE("matrix products and transposition") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const Matrix b = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});

    const Matrix ab = a * b;
    REQUIRE(ab(0, 0) == 2.0);
    REQUIRE(ab(0, 1) == 1.0);
    REQUIRE(ab(1, 0) == 4.0);
    REQUIRE(ab(1, 1) == 3.0);

    const Matrix at = a.transposed();
    REQUIRE(at(0, 1) == 3.0);
    REQUIRE(at(1, 0) == 2.0);

    const Vector y = a * Vector{1.0, 1.0};
    REQUIRE(y == Vector{3.0, 7.0});

    REQUIRE_THROWS_AS(a * Matrix(3, 2), contract_violation);
}

TEST_CASE("hcat, vcat, and row selection") {
    const Matrix a = Matrix::from_rows({{1.0}, {2.0}});
    const Matrix b = Matrix::from_rows({{3.0}, {4.0}});

    const Matrix wide = hcat(a, b);
    REQUIRE(wide.rows() == 2);
    REQUIRE(wide.cols() == 2);
    REQUIRE(wide(0, 1) == 3.0);

    const Matrix tall = vcat(a, b);
    REQUIRE(tall.rows() == 4);
    REQUIRE(tall(3, 0) == 4.0);

    // Zero-column sides pass through untouched.
    const Matrix empty(2, 0);
    REQUIRE(hcat(empty, a).cols() == 1);
    REQUIRE(hcat(a, empty).cols() == 1);

    const Matrix sel = select_rows(tall, {2, 0});
    REQUIRE(sel(0, 0) == 3.0);
    REQUIRE(sel(1, 0) == 1.0);
    REQUIRE_THROWS_AS(select_rows(tall, {9}), contract_violation);
}

TEST_CASE("norms and vector helpers") {
    const Matrix a = Matrix::from_rows({{3.0, 0.0}, {0.0, 4.0}});
    REQUIRE(frobenius_norm(a) == 5.0);
    REQUIRE(max_abs(a) == 4.0);

    REQUIRE(dot(Vector{1.0, 2.0}, Vector{3.0, 4.0}) == 11.0);
    REQUIRE(norm(Vector{3.0, 4.0}) == 5.0);
    REQUIRE(normalized(Vector{0.0, 2.0}) == Vector{0.0, 1.0});
    REQUIRE_THROWS_AS(normalized(Vector{0.0, 0.0}), contract_violation);

    const Vector e1 = unit_vector(3, 0);
    REQUIRE(e1 == Vector{1.0, 0.0, 0.0});
}
