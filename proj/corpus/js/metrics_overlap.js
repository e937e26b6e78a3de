var ADMIN = 'https://metrics.example.test/v1/admin';

function addUser(email) {
  $.post(ADMIN + '/users', {email: email});
}
