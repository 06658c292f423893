"""Core package initialization"""
# Don't import pipeline here to avoid circular imports
# Import modules directly where needed instead

__all__ = []
