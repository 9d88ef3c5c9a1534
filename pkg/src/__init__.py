"""Price of anarchy toolkit source package."""
