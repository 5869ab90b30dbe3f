"""Payoff, expectation and backtest tools for structured investment notes."""

__version__ = "0.1.0"
