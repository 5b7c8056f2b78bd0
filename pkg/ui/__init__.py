# MAPFlow UI Module
