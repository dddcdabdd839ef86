# Backend API module for Workforce Distribution AI