"""Configuration package for the application""" 