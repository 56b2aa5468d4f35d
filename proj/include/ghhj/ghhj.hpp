#ifndef GHHJ_GHHJ_HPP_
#define GHHJ_GHHJ_HPP_

#include "ghhj/core.hpp"
#include "ghhj/gh_maps.hpp"
#include "ghhj/hopf_lax.hpp"
#include "ghhj/io.hpp"
#include "ghhj/kantorovich.hpp"
#include "ghhj/metric_space.hpp"
#include "ghhj/stability.hpp"
#include "ghhj/transport_simplex.hpp"

#endif  // GHHJ_GHHJ_HPP_
