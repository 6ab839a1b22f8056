# Ahlfors toolkit - Modules
