#pragma once

#include <span>

#include "divfree/field.hpp"

// Data-parallel inner loops. Every kernel exists twice: a plain serial
// reference and an OpenMP version. The two produce bitwise-identical output
// for any thread count (reductions accumulate per row, then sum rows in
// order), which the kernel tests check. Library code calls the omp versions.

namespace divfree::kernels {

namespace serial {

/// In-place Leray projector on a pair of spectral planes.
void leray_modes(const Grid& grid, std::span<Complex> uh, std::span<Complex> vh);
void dealias(const Grid& grid, std::span<Complex> coeffs);
/// out = u * wx + v * wy
void advection(std::span<const double> u, std::span<const double> v,
               std::span<const double> wx, std::span<const double> wy, std::span<double> out);
/// Crank-Nicolson viscous update with an explicit right-hand side.
void crank_nicolson(const Grid& grid, double nu, double dt, std::span<const Complex> omega,
                    std::span<const Complex> rhs, std::span<Complex> out);
void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out);
double dot(const Grid& grid, std::span<const double> a, std::span<const double> b);

}  // namespace serial

namespace omp {

void leray_modes(const Grid& grid, std::span<Complex> uh, std::span<Complex> vh);
void dealias(const Grid& grid, std::span<Complex> coeffs);
void advection(std::span<const double> u, std::span<const double> v,
               std::span<const double> wx, std::span<const double> wy, std::span<double> out);
void crank_nicolson(const Grid& grid, double nu, double dt, std::span<const Complex> omega,
                    std::span<const Complex> rhs, std::span<Complex> out);
void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out);
double dot(const Grid& grid, std::span<const double> a, std::span<const double> b);

}  // namespace omp

/// Number of threads the omp kernels and batch loops use.
int thread_count();
void set_thread_count(int n);

}  // namespace divfree::kernels
