# Ahlfors toolkit - Utilities Module
