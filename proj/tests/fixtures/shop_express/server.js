const express = require('express');
const productRoutes = require('./products/routes');
const orderRoutes = require('./orders/routes');
const authRoutes = require('./auth/routes');

const app = express();
app.use(express.json());

app.use('/api/products', productRoutes);
app.use('/api/orders', orderRoutes);
app.use('/auth', authRoutes);

app.get('/health', (req, res) => {
  res.json({ status: 'ok' });
});

if (require.main === module) {
  app.listen(process.env.PORT || 3000);
}

module.exports = app;
