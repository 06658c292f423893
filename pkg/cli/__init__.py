"""Command-line package initialization"""
from .app import main

__all__ = ['main']
